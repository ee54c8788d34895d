#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "gpt_spectra/channel.hpp"
#include "gpt_spectra/theory.hpp"

namespace gpt {

/// All generators take the engine explicitly; there is no hidden RNG state.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs
/// of R's diagonal folded into Q.
inline Eigen::MatrixXd random_orthogonal(int d, Rng& rng) {
  const Eigen::MatrixXd g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline std::vector<int> random_permutation(int d, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

/// Flat-Dirichlet probability vector sorted non-increasing. With `rank` below
/// d the trailing entries are exact zeros.
inline std::vector<double> random_spectrum(int d, Rng& rng, int rank = -1) {
  if (rank < 0 || rank > d) rank = d;
  std::vector<double> v(static_cast<std::size_t>(d), 0.0);
  double total = 0.0;
  for (int i = 0; i < rank; ++i) {
    v[static_cast<std::size_t>(i)] = -std::log(1.0 - uniform01(rng));
    total += v[static_cast<std::size_t>(i)];
  }
  for (double& x : v) x /= total;
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

inline State quantum_state_with(const Theory& theory, const std::vector<double>& spectrum,
                                const Eigen::MatrixXd& basis) {
  const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(spectrum.data(), static_cast<Eigen::Index>(spectrum.size()));
  const Eigen::MatrixXd m = basis * p.asDiagonal() * basis.transpose();
  return State::from_matrix(theory, 0.5 * (m + m.transpose()));
}

/// Random normalized state. Quantum states mix full-rank, rank-deficient and
/// degenerate spectra so that property tests see all three.
inline State random_state(const Theory& theory, Rng& rng) {
  const int d = theory.dim();
  switch (theory.kind()) {
    case TheoryKind::QuantumReal: {
      const int flavour = uniform_int(rng, 0, 9);
      std::vector<double> spectrum;
      if (flavour < 7 || d == 1) {
        spectrum = random_spectrum(d, rng);
      } else if (flavour < 9) {
        spectrum = random_spectrum(d, rng, uniform_int(rng, 1, d - 1));
      } else {
        spectrum = random_spectrum(d, rng);
        spectrum[1] = spectrum[0] = 0.5 * (spectrum[0] + spectrum[1]);
      }
      return quantum_state_with(theory, spectrum, random_orthogonal(d, rng));
    }
    case TheoryKind::Classical: {
      std::vector<double> p = random_spectrum(d, rng);
      std::shuffle(p.begin(), p.end(), rng);
      return State(theory, Eigen::Map<const Eigen::VectorXd>(p.data(), d));
    }
    case TheoryKind::Gbit:
      return gbit_state(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
  }
  throw Error(ErrorCode::InvalidInput, "unknown theory");
}

inline ReversibleChannel random_reversible(const Theory& theory, Rng& rng) {
  switch (theory.kind()) {
    case TheoryKind::QuantumReal:
      return ReversibleChannel::from_matrix(theory, random_orthogonal(theory.dim(), rng));
    case TheoryKind::Classical:
      return ReversibleChannel::permutation(theory, random_permutation(theory.dim(), rng));
    case TheoryKind::Gbit:
      return ReversibleChannel::dihedral(uniform_int(rng, 0, 7));
  }
  throw Error(ErrorCode::InvalidInput, "unknown theory");
}

/// Ordered orthonormal basis of pure quantum states.
inline std::vector<State> random_quantum_basis(const Theory& theory, Rng& rng) {
  const Eigen::MatrixXd o = random_orthogonal(theory.dim(), rng);
  std::vector<State> out;
  for (int i = 0; i < theory.dim(); ++i) out.push_back(projector_state(theory, o.col(i)));
  return out;
}

/// Average of `terms` uniformly random permutation matrices.
inline Eigen::MatrixXd random_doubly_stochastic(int d, int terms, Rng& rng) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < terms; ++k) {
    const auto perm = random_permutation(d, rng);
    for (int i = 0; i < d; ++i) m(i, perm[static_cast<std::size_t>(i)]) += 1.0;
  }
  return m / terms;
}

}  // namespace gpt
