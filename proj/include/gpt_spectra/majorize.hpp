#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "gpt_spectra/error.hpp"
#include "gpt_spectra/pure.hpp"
#include "gpt_spectra/spectral.hpp"
#include "gpt_spectra/tolerance.hpp"

namespace gpt {

/// A probability vector sorted in non-increasing order.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::InvalidInput, "empty spectrum");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
      if (values_[i + 1] > values_[i] + 1e-12) throw Error(ErrorCode::NotSorted, "spectrum is not non-increasing");
    const double band = tolerances().majorization;
    for (double v : values_)
      if (v < -band || v > 1.0 + band) throw Error(ErrorCode::InvalidInput, "spectrum entry outside [0, 1]");
    if (std::abs(sum() - 1.0) > band) throw Error(ErrorCode::InvalidInput, "spectrum does not sum to 1");
  }

  /// Sorts before validating.
  static Spectrum sorted(std::vector<double> values) {
    std::sort(values.begin(), values.end(), std::greater<>());
    return Spectrum(std::move(values));
  }

  static Spectrum of(const Diagonalization& diag, std::size_t length) { return sorted(diag.padded(length)); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  /// Zero-padded copy of the given length.
  Spectrum padded(std::size_t length) const {
    if (length < values_.size()) throw Error(ErrorCode::LengthMismatch, "cannot pad to a shorter length");
    std::vector<double> v = values_;
    v.resize(length, 0.0);
    return Spectrum(std::move(v));
  }

  std::vector<double> partial_sums() const {
    std::vector<double> out(values_.size());
    std::partial_sum(values_.begin(), values_.end(), out.begin());
    return out;
  }

 private:
  std::vector<double> values_;
};

/// First k (1-based, the length of the offending partial sum) at which x's
/// partial sum exceeds y's, or 0 when the totals disagree; nullopt when x is
/// majorized by y.
inline std::optional<std::size_t> majorization_violation(const Spectrum& y, const Spectrum& x) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "spectra differ in length");
  const double tol = tolerances().majorization;
  const auto sx = x.partial_sums();
  const auto sy = y.partial_sums();
  for (std::size_t k = 0; k + 1 < sx.size(); ++k)
    if (sx[k] > sy[k] + tol) return k + 1;
  if (std::abs(sx.back() - sy.back()) > tol) return 0;
  return std::nullopt;
}

/// True iff x is majorized by y.
inline bool majorizes(const Spectrum& y, const Spectrum& x) { return !majorization_violation(y, x).has_value(); }

inline bool is_doubly_stochastic(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "doubly stochastic matrices are square");
  if (m.size() == 0) return false;
  if (m.minCoeff() < -tol) return false;
  const Eigen::VectorXd rows = m.rowwise().sum();
  const Eigen::VectorXd cols = m.colwise().sum().transpose();
  return (rows.array() - 1.0).abs().maxCoeff() <= tol && (cols.array() - 1.0).abs().maxCoeff() <= tol;
}

/// perm[i] is the column holding the 1 in row i.
using Permutation = std::vector<int>;

inline Eigen::MatrixXd permutation_matrix(const Permutation& perm) {
  const auto d = static_cast<Eigen::Index>(perm.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  return m;
}

struct BirkhoffDecomposition {
  std::vector<double> weights;
  std::vector<Permutation> permutations;

  Eigen::MatrixXd reconstruct(Eigen::Index d) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t k = 0; k < weights.size(); ++k) m += weights[k] * permutation_matrix(permutations[k]);
    return m;
  }
};

namespace detail {

/// Perfect matching on the support of m (entries > threshold) by augmenting
/// paths; rows in index order, columns tried in index order.
inline std::optional<Permutation> perfect_matching(const Eigen::MatrixXd& m, double threshold) {
  const auto d = static_cast<int>(m.rows());
  std::vector<int> row_of_col(static_cast<std::size_t>(d), -1);
  std::vector<char> visited;
  std::function<bool(int)> augment = [&](int r) {
    for (int c = 0; c < d; ++c) {
      if (m(r, c) <= threshold || visited[static_cast<std::size_t>(c)]) continue;
      visited[static_cast<std::size_t>(c)] = 1;
      const int other = row_of_col[static_cast<std::size_t>(c)];
      if (other < 0 || augment(other)) {
        row_of_col[static_cast<std::size_t>(c)] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < d; ++r) {
    visited.assign(static_cast<std::size_t>(d), 0);
    if (!augment(r)) return std::nullopt;
  }
  Permutation perm(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) perm[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(c)])] = c;
  return perm;
}

}  // namespace detail

/// Greedy Birkhoff-von Neumann decomposition: repeatedly take a perfect
/// matching on the support, peel off its smallest entry as a weight.
inline BirkhoffDecomposition birkhoff(const Eigen::MatrixXd& m) {
  const auto& tol = tolerances();
  if (!is_doubly_stochastic(m, tol.doubly_stochastic))
    throw Error(ErrorCode::InvalidInput, "birkhoff needs a doubly stochastic matrix");
  const Eigen::Index d = m.rows();
  Eigen::MatrixXd rest = m.cwiseMax(0.0);
  BirkhoffDecomposition out;
  const std::size_t max_terms = static_cast<std::size_t>(d * d) + 1;
  while (rest.maxCoeff() >= tol.birkhoff_residual) {
    if (out.weights.size() >= max_terms) throw Error(ErrorCode::NoPerfectMatching, "extraction did not terminate");
    const auto perm = detail::perfect_matching(rest, tol.birkhoff_support);
    if (!perm) throw Error(ErrorCode::NoPerfectMatching, "support has no perfect matching");
    double lambda = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) lambda = std::min(lambda, rest(i, (*perm)[static_cast<std::size_t>(i)]));
    for (Eigen::Index i = 0; i < d; ++i) {
      double& entry = rest(i, (*perm)[static_cast<std::size_t>(i)]);
      entry -= lambda;
      if (entry <= tol.birkhoff_support) entry = 0.0;
    }
    out.weights.push_back(lambda);
    out.permutations.push_back(*perm);
  }
  const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  for (double& w : out.weights) w /= total;
  return out;
}

/// Doubly stochastic P with p = P q, built as a product of at most d - 1
/// T-transforms (Hardy-Littlewood-Polya). Requires q to majorize p.
inline Eigen::MatrixXd transfer_matrix(const Spectrum& p, const Spectrum& q) {
  if (p.size() != q.size()) throw Error(ErrorCode::LengthMismatch, "spectra differ in length");
  if (!majorizes(q, p)) throw Error(ErrorCode::NotMajorized, "q does not majorize p");
  const auto d = static_cast<Eigen::Index>(p.size());
  Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(p.values().data(), d);
  Eigen::VectorXd work = Eigen::Map<const Eigen::VectorXd>(q.values().data(), d);
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(d, d);
  const double eps = 1e-15;

  for (Eigen::Index round = 0; round + 1 < d; ++round) {
    Eigen::Index j = 0;
    while (j < d && !(target(j) < work(j) - eps)) ++j;
    if (j == d) break;
    Eigen::Index k = j + 1;
    while (k < d && !(target(k) > work(k) + eps)) ++k;
    if (k == d) break;
    const double gap = work(j) - work(k);
    if (gap <= 0.0) break;
    const double moved = std::min(work(j) - target(j), target(k) - work(k));
    const double t = moved / gap;  // weight of the swapped coordinate
    Eigen::MatrixXd transform = Eigen::MatrixXd::Identity(d, d);
    transform(j, j) = 1.0 - t;
    transform(k, k) = 1.0 - t;
    transform(j, k) = t;
    transform(k, j) = t;
    work = transform * work;
    product = transform * product;
  }
  const Eigen::VectorXd qv = Eigen::Map<const Eigen::VectorXd>(q.values().data(), d);
  const double err = (target - product * qv).cwiseAbs().maxCoeff();
  if (err > tolerances().majorization)
    throw Error(ErrorCode::NotMajorized, "T-transform construction misses p by " + std::to_string(err));
  return product;
}

/// Entries (psi_i^dagger | phi_j) for two maximal sets of pure states.
inline Eigen::MatrixXd transition_matrix(const std::vector<State>& psi, const std::vector<State>& phi) {
  if (psi.empty() || phi.empty()) throw Error(ErrorCode::NotMaximal, "empty state set");
  const Theory theory = psi.front().theory();
  const auto d = static_cast<std::size_t>(theory.dim_operational());
  if (psi.size() != d || phi.size() != d) throw Error(ErrorCode::NotMaximal, "sets must have dim_operational states");
  if (!theory.has_unique_dagger()) throw Error(ErrorCode::DaggerNotUnique, "model has no unique dagger");
  for (const auto* set : {&psi, &phi})
    if (std::holds_alternative<DistinguishabilityFailure>(verify_distinguishable(*set)))
      throw Error(ErrorCode::NotDistinguishable, "set is not perfectly distinguishable");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const Effect a = dagger(psi[i]);
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pair(a, phi[j]);
  }
  if (!is_doubly_stochastic(m, tolerances().doubly_stochastic))
    throw Error(ErrorCode::InvalidInput, "transition matrix is not doubly stochastic");
  return m;
}

}  // namespace gpt
