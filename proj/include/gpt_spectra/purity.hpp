#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "gpt_spectra/channel.hpp"
#include "gpt_spectra/majorize.hpp"
#include "gpt_spectra/random.hpp"
#include "gpt_spectra/spectral.hpp"

namespace gpt {

/// Random-reversible channel: a convex mixture of reversible channels.
class RaReChannel {
 public:
  RaReChannel(std::vector<double> weights, std::vector<ReversibleChannel> channels)
      : weights_(std::move(weights)), channels_(std::move(channels)) {
    if (weights_.empty() || weights_.size() != channels_.size())
      throw Error(ErrorCode::InvalidInput, "weights and channels must be nonempty and of equal length");
    for (double w : weights_)
      if (w < 0.0) throw Error(ErrorCode::InvalidInput, "negative weight");
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidInput, "weights do not sum to 1");
    for (const auto& c : channels_)
      if (!(c.theory() == channels_.front().theory()))
        throw Error(ErrorCode::DimensionMismatch, "channels act on different systems");
  }

  static RaReChannel single(const ReversibleChannel& channel) { return RaReChannel({1.0}, {channel}); }

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<ReversibleChannel>& channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const Theory& theory() const noexcept { return channels_.front().theory(); }

 private:
  std::vector<double> weights_;
  std::vector<ReversibleChannel> channels_;
};

inline State apply_rare(const RaReChannel& r, const State& rho) {
  if (!(r.theory() == rho.theory()))
    throw Error(ErrorCode::DimensionMismatch, "channel and state belong to different systems");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rho.coords().size());
  for (std::size_t k = 0; k < r.size(); ++k) out += r.weights()[k] * apply_channel(r.channels()[k], rho).coords();
  return State(rho.theory(), out);
}

/// outer after inner; all pairwise products of the two mixtures.
inline RaReChannel compose(const RaReChannel& outer, const RaReChannel& inner) {
  std::vector<double> weights;
  std::vector<ReversibleChannel> channels;
  for (std::size_t a = 0; a < outer.size(); ++a)
    for (std::size_t b = 0; b < inner.size(); ++b) {
      weights.push_back(outer.weights()[a] * inner.weights()[b]);
      channels.push_back(compose(outer.channels()[a], inner.channels()[b]));
    }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return RaReChannel(std::move(weights), std::move(channels));
}

/// Seeded generator for property tests: normalized uniform weights and
/// uniformly drawn reversible channels.
inline RaReChannel random_rare(const Theory& theory, int n_terms, std::uint64_t seed) {
  if (n_terms < 1) throw Error(ErrorCode::InvalidInput, "n_terms must be at least 1");
  Rng rng(seed);
  std::vector<double> weights;
  std::vector<ReversibleChannel> channels;
  for (int k = 0; k < n_terms; ++k) {
    weights.push_back(uniform01(rng) + 1e-300);
    channels.push_back(random_reversible(theory, rng));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return RaReChannel(std::move(weights), std::move(channels));
}

enum class MixednessVerdict { MoreMixed, NotMoreMixed, EquallyMixed };

inline std::string_view verdict_name(MixednessVerdict v) {
  switch (v) {
    case MixednessVerdict::MoreMixed: return "MoreMixed";
    case MixednessVerdict::NotMoreMixed: return "NotMoreMixed";
    case MixednessVerdict::EquallyMixed: return "EquallyMixed";
  }
  return "";
}

struct ConvertibilityCertificate {
  MixednessVerdict verdict;
  std::optional<RaReChannel> rare;              // MoreMixed
  std::optional<ReversibleChannel> reversible;  // EquallyMixed
  std::optional<std::size_t> violating_index;   // NotMoreMixed
  double residual_error = 0.0;                  // max-norm of witness(sigma) - rho
  std::vector<double> spectrum_rho;
  std::vector<double> spectrum_sigma;
};

namespace detail {

struct SpectralPair {
  Diagonalization rho;
  Diagonalization sigma;
  Spectrum p;  // in the order of rho.maximal_set
  Spectrum q;  // in the order of sigma.maximal_set
};

inline SpectralPair spectral_pair(const State& rho, const State& sigma) {
  if (!(rho.theory() == sigma.theory()))
    throw Error(ErrorCode::DimensionMismatch, "states belong to different systems");
  const auto d = static_cast<std::size_t>(rho.theory().dim_operational());
  Diagonalization dr = diagonalize(rho);
  Diagonalization ds = diagonalize(sigma);
  Spectrum p(dr.padded(d));
  Spectrum q(ds.padded(d));
  return {std::move(dr), std::move(ds), std::move(p), std::move(q)};
}

inline RaReChannel synthesize_from(const SpectralPair& sp, const State& rho, const State& sigma) {
  if (!majorizes(sp.q, sp.p)) throw Error(ErrorCode::NotMajorized, "spectrum of sigma does not majorize that of rho");
  const std::vector<State>& psi = sp.rho.maximal_set;
  const std::vector<State>& phi = sp.sigma.maximal_set;

  const Eigen::MatrixXd transfer = transfer_matrix(sp.p, sp.q);
  const BirkhoffDecomposition bvn = birkhoff(transfer);

  const auto basis_change = find_connecting_channel(phi, psi);  // U phi_i = psi_i
  if (!basis_change) throw Error(ErrorCode::SynthesisVerificationFailed, "no channel maps one eigenbasis onto the other");

  std::vector<ReversibleChannel> channels;
  for (const Permutation& perm : bvn.permutations) {
    // U_k phi_j = sum_i [Pi_k]_ij psi_i, i.e. psi_j is sent to psi_i with perm[i] = j.
    std::vector<State> image = psi;
    for (std::size_t i = 0; i < perm.size(); ++i) image[static_cast<std::size_t>(perm[i])] = psi[i];
    const auto relabel = find_connecting_channel(psi, image);
    if (!relabel) throw Error(ErrorCode::SynthesisVerificationFailed, "permutation of the eigenbasis is not reversible");
    channels.push_back(compose(*relabel, *basis_change));
  }
  RaReChannel r(bvn.weights, std::move(channels));
  const double err = apply_rare(r, sigma).max_abs_diff(rho);
  if (err > tolerances().reconstruction)
    throw Error(ErrorCode::SynthesisVerificationFailed, "synthesized channel misses rho by " + std::to_string(err));
  return r;
}

}  // namespace detail

/// A RaRe channel R with R(sigma) = rho, built from the two diagonalizations,
/// a doubly stochastic transfer between their spectra and its Birkhoff terms.
inline RaReChannel synthesize_rare(const State& rho, const State& sigma) {
  return detail::synthesize_from(detail::spectral_pair(rho, sigma), rho, sigma);
}

/// Decides whether rho is more mixed than sigma and returns a witness.
inline ConvertibilityCertificate is_more_mixed(const State& rho, const State& sigma) {
  const detail::SpectralPair sp = detail::spectral_pair(rho, sigma);
  ConvertibilityCertificate cert{MixednessVerdict::NotMoreMixed, std::nullopt, std::nullopt, std::nullopt, 0.0,
                                 sp.p.values(), sp.q.values()};

  double spread = 0.0;
  for (std::size_t i = 0; i < sp.p.size(); ++i) spread = std::max(spread, std::abs(sp.p[i] - sp.q[i]));
  if (spread <= tolerances().majorization) {
    const auto u = find_connecting_channel(sp.sigma.maximal_set, sp.rho.maximal_set);
    if (!u) throw Error(ErrorCode::SynthesisVerificationFailed, "equal spectra but no connecting channel");
    cert.verdict = MixednessVerdict::EquallyMixed;
    cert.residual_error = apply_channel(*u, sigma).max_abs_diff(rho);
    cert.reversible = *u;
    return cert;
  }
  if (const auto k = majorization_violation(sp.q, sp.p)) {
    cert.violating_index = *k;
    return cert;
  }
  cert.verdict = MixednessVerdict::MoreMixed;
  cert.rare = detail::synthesize_from(sp, rho, sigma);
  cert.residual_error = apply_rare(*cert.rare, sigma).max_abs_diff(rho);
  return cert;
}

}  // namespace gpt
