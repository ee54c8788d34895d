#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "gpt_spectra/eigensolve.hpp"
#include "gpt_spectra/spectral.hpp"
#include "gpt_spectra/theory.hpp"

namespace gpt {

/// Pure state of A x B written through its amplitude matrix W: the state is
/// vec(W) vec(W)^T, with marginals W W^T on A and W^T W on B.
class BipartitePureState {
 public:
  explicit BipartitePureState(Eigen::MatrixXd amplitudes) : w_(std::move(amplitudes)) {
    if (w_.size() == 0) throw Error(ErrorCode::InvalidInput, "empty amplitude matrix");
    if (std::abs(w_.squaredNorm() - 1.0) > tolerances().normalization)
      throw Error(ErrorCode::NotNormalized, "amplitude matrix must have unit Frobenius norm");
  }

  int dim_a() const noexcept { return static_cast<int>(w_.rows()); }
  int dim_b() const noexcept { return static_cast<int>(w_.cols()); }
  const Eigen::MatrixXd& amplitudes() const noexcept { return w_; }

  State marginal_a() const {
    const Eigen::MatrixXd m = w_ * w_.transpose();
    return State::from_matrix(Theory::quantum_real(dim_a()), 0.5 * (m + m.transpose()));
  }
  State marginal_b() const {
    const Eigen::MatrixXd m = w_.transpose() * w_;
    return State::from_matrix(Theory::quantum_real(dim_b()), 0.5 * (m + m.transpose()));
  }

 private:
  Eigen::MatrixXd w_;
};

/// Minimal purification: W = sum_i sqrt(p_i) v_i e_i^T from the Jacobi
/// eigendecomposition of rho.
inline BipartitePureState purify(const State& rho) {
  if (!rho.theory().is_quantum()) throw Error(ErrorCode::InvalidInput, "purification is implemented for the quantum model");
  require_normalized(rho);
  const SymmetricEigen eig = eigensolve_symmetric(rho.matrix());
  const int d = rho.theory().dim();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
  // Weights inside the peeling stop band are rounding noise; their square
  // roots would otherwise leave O(1e-8) columns behind.
  for (int i = 0; i < d; ++i)
    if (eig.values(i) > tolerances().stop_weight) w.col(i) = std::sqrt(eig.values(i)) * eig.vectors.col(i);
  w /= w.norm();
  return BipartitePureState(w);
}

/// The marginal on the purifying system.
inline State complementary(const BipartitePureState& psi) { return psi.marginal_b(); }

/// Unnormalized state left on A after effect b clicks on B: W b^T W^T.
inline State steered_state(const BipartitePureState& psi, const Effect& b) {
  if (b.theory() != Theory::quantum_real(psi.dim_b()))
    throw Error(ErrorCode::DimensionMismatch, "effect does not act on the purifying system");
  const Eigen::MatrixXd m = psi.amplitudes() * b.matrix().transpose() * psi.amplitudes().transpose();
  return State(Theory::quantum_real(psi.dim_a()), Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
}

/// Same map for the other side: W^T a W is left on B after a clicks on A.
inline State steered_state_b(const BipartitePureState& psi, const Effect& a) {
  if (a.theory() != Theory::quantum_real(psi.dim_a()))
    throw Error(ErrorCode::DimensionMismatch, "effect does not act on system A");
  const Eigen::MatrixXd m = psi.amplitudes().transpose() * a.matrix() * psi.amplitudes();
  return State(Theory::quantum_real(psi.dim_b()), Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
}

namespace detail {

inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::MatrixXd inv_s = Eigen::MatrixXd::Zero(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) inv_s(i, i) = 1.0 / s(i);
  return svd.matrixV() * inv_s * svd.matrixU().transpose();
}

}  // namespace detail

struct SteeringResult {
  Effect effect;              // on B
  double reproduction_error;  // max-norm of steered_state(psi, effect) - weight * sigma
};

/// Effect b on the purifying system that prepares weight * sigma on A.
/// Requires weight * sigma <= marginal_a(psi) in the PSD order.
inline SteeringResult steer(const BipartitePureState& psi, const State& sigma, double weight) {
  const auto& tol = tolerances();
  if (sigma.theory() != Theory::quantum_real(psi.dim_a()))
    throw Error(ErrorCode::DimensionMismatch, "sigma does not live on system A");
  if (weight < 0.0 || weight > 1.0 + tol.normalization) throw Error(ErrorCode::OutOfRange, "weight must lie in [0, 1]");
  const Eigen::MatrixXd target = weight * sigma.matrix();
  const Eigen::MatrixXd gap = psi.marginal_a().matrix() - target;
  if (quantum_eigenvalues(gap).minCoeff() < -tol.cone)
    throw Error(ErrorCode::NotContained, "weight * sigma is not below the marginal");

  const Eigen::MatrixXd pinv = detail::pseudo_inverse(psi.amplitudes(), tol.pinv_cutoff);
  Eigen::MatrixXd b = (pinv * target * pinv.transpose()).transpose();
  b = 0.5 * (b + b.transpose());
  Effect effect = Effect::from_matrix(Theory::quantum_real(psi.dim_b()), b);
  if (!is_valid_effect(effect)) throw Error(ErrorCode::NotContained, "steering effect is not a valid effect");
  const double err = (steered_state(psi, effect).matrix() - target).cwiseAbs().maxCoeff();
  return {std::move(effect), err};
}

/// Rank of b -> W b^T W^T as a linear map on d_B x d_B matrices.
inline Eigen::Index steering_map_rank(const BipartitePureState& psi) {
  const Eigen::MatrixXd& w = psi.amplitudes();
  Eigen::MatrixXd kron(w.rows() * w.rows(), w.cols() * w.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      kron.block(i * w.rows(), j * w.cols(), w.rows(), w.cols()) = w(i, j) * w;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kron);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tolerances().pinv_cutoff) ++rank;
  return rank;
}

/// Effects on B are told apart by what they steer A to.
inline bool is_faithful(const BipartitePureState& psi) {
  return steering_map_rank(psi) == static_cast<Eigen::Index>(psi.dim_b()) * psi.dim_b();
}

struct PurificationAlignment {
  Eigen::MatrixXd orthogonal;  // O with W2 = W1 O^T, a reversible channel on B
  double error;
};

/// Orthogonal Procrustes fit between two purifications of the same state.
inline PurificationAlignment align_purifications(const BipartitePureState& first, const BipartitePureState& second) {
  if (first.dim_a() != second.dim_a() || first.dim_b() != second.dim_b())
    throw Error(ErrorCode::DimensionMismatch, "purifications of different shapes");
  const Eigen::MatrixXd& w1 = first.amplitudes();
  const Eigen::MatrixXd& w2 = second.amplitudes();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w1.transpose() * w2, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd ot = svd.matrixU() * svd.matrixV().transpose();
  return {ot.transpose(), (w1 * ot - w2).cwiseAbs().maxCoeff()};
}

struct PStarReport {
  double p_star_state;
  double p_star_complement;
  double difference;
};

inline PStarReport verify_pstar_equality(const State& rho) {
  const double a = p_star(rho);
  const double b = p_star(complementary(purify(rho)));
  return {a, b, std::abs(a - b)};
}

}  // namespace gpt
