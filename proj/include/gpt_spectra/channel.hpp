#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "gpt_spectra/theory.hpp"

namespace gpt {

/// An element of a model's reversible group, stored as an orthogonal matrix:
/// quantum rho -> O rho O^T, classical p -> P p with P a permutation matrix,
/// gbit (1, x, y) -> (1, G (x, y)) with G a signed 2x2 permutation.
class ReversibleChannel {
 public:
  static ReversibleChannel identity(const Theory& theory) {
    return ReversibleChannel(theory, Eigen::MatrixXd::Identity(action_size(theory), action_size(theory)));
  }

  /// Validates that `matrix` belongs to the model's group.
  static ReversibleChannel from_matrix(const Theory& theory, const Eigen::MatrixXd& matrix) {
    const Eigen::Index n = action_size(theory);
    if (matrix.rows() != n || matrix.cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "channel matrix has the wrong size");
    const double tol = tolerances().channel;
    const Eigen::MatrixXd gram = matrix.transpose() * matrix;
    if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > tol * n)
      throw Error(ErrorCode::InvalidInput, "channel matrix is not orthogonal");
    if (!theory.is_quantum()) {
      // Permutations (classical) and signed permutations (gbit): entries in {0, +-1}.
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double v = matrix(i, j);
          const bool ok = std::abs(v) <= tol || std::abs(v - 1.0) <= tol ||
                          (theory.is_gbit() && std::abs(v + 1.0) <= tol);
          if (!ok) throw Error(ErrorCode::InvalidInput, "matrix is not in the model's reversible group");
        }
    }
    if (theory.is_quantum()) return ReversibleChannel(theory, matrix);
    return ReversibleChannel(theory, matrix.array().round().matrix());
  }

  /// Classical permutation sending vertex j to vertex perm[j].
  static ReversibleChannel permutation(const Theory& theory, const std::vector<int>& perm) {
    if (!theory.is_classical()) throw Error(ErrorCode::InvalidInput, "permutation channels are classical");
    const int d = theory.dim();
    if (static_cast<int>(perm.size()) != d) throw Error(ErrorCode::DimensionMismatch, "permutation length");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (int j = 0; j < d; ++j) {
      const int i = perm[static_cast<std::size_t>(j)];
      if (i < 0 || i >= d || seen[static_cast<std::size_t>(i)])
        throw Error(ErrorCode::InvalidInput, "not a permutation");
      seen[static_cast<std::size_t>(i)] = true;
      m(i, j) = 1.0;
    }
    return ReversibleChannel(theory, m);
  }

  /// The eight symmetries of the square: r^k for k < 4, then r^k s, with r the
  /// counter-clockwise quarter turn and s the reflection y -> -y.
  static ReversibleChannel dihedral(int index) {
    if (index < 0 || index >= 8) throw Error(ErrorCode::InvalidInput, "dihedral index out of range");
    Eigen::Matrix2d r;
    r << 0, -1, 1, 0;
    Eigen::Matrix2d s;
    s << 1, 0, 0, -1;
    Eigen::Matrix2d g = Eigen::Matrix2d::Identity();
    for (int k = 0; k < index % 4; ++k) g = r * g;
    if (index >= 4) g = g * s;
    return ReversibleChannel(Theory::gbit(), g);
  }

  const Theory& theory() const noexcept { return theory_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  ReversibleChannel inverse() const { return ReversibleChannel(theory_, matrix_.transpose()); }

  friend bool operator==(const ReversibleChannel& a, const ReversibleChannel& b) {
    return a.theory_ == b.theory_ && a.matrix_ == b.matrix_;
  }

 private:
  ReversibleChannel(Theory theory, Eigen::MatrixXd matrix) : theory_(theory), matrix_(std::move(matrix)) {}

  static Eigen::Index action_size(const Theory& theory) { return theory.is_gbit() ? 2 : theory.dim(); }

  friend ReversibleChannel compose(const ReversibleChannel& outer, const ReversibleChannel& inner);

  Theory theory_;
  Eigen::MatrixXd matrix_;
};

/// outer after inner.
inline ReversibleChannel compose(const ReversibleChannel& outer, const ReversibleChannel& inner) {
  if (!(outer.theory() == inner.theory()))
    throw Error(ErrorCode::DimensionMismatch, "channels act on different systems");
  return ReversibleChannel(outer.theory(), outer.matrix() * inner.matrix());
}

inline State apply_channel(const ReversibleChannel& channel, const State& rho) {
  if (!(channel.theory() == rho.theory()))
    throw Error(ErrorCode::DimensionMismatch, "channel and state belong to different systems");
  const Eigen::MatrixXd& g = channel.matrix();
  switch (rho.theory().kind()) {
    case TheoryKind::QuantumReal: {
      const Eigen::MatrixXd out = g * rho.matrix() * g.transpose();
      return State::from_matrix(rho.theory(), 0.5 * (out + out.transpose()));
    }
    case TheoryKind::Classical:
      return State(rho.theory(), g * rho.coords());
    case TheoryKind::Gbit: {
      Eigen::VectorXd out = rho.coords();
      out.tail<2>() = g * rho.coords().tail<2>();
      return State(rho.theory(), out);
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown theory");
}

/// A finite generating set of the reversible group (quantum: quarter-turn
/// Givens rotations plus two irrational-angle rotations and one reflection).
inline std::vector<ReversibleChannel> group_generators(const Theory& theory) {
  std::vector<ReversibleChannel> out;
  const int d = theory.dim();
  switch (theory.kind()) {
    case TheoryKind::QuantumReal: {
      out.push_back(ReversibleChannel::identity(theory));
      for (int i = 0; i + 1 < d; ++i) {
        for (double angle : {0.5 * M_PI, 1.0, std::sqrt(2.0)}) {
          Eigen::MatrixXd o = Eigen::MatrixXd::Identity(d, d);
          o(i, i) = std::cos(angle);
          o(i + 1, i + 1) = std::cos(angle);
          o(i, i + 1) = -std::sin(angle);
          o(i + 1, i) = std::sin(angle);
          out.push_back(ReversibleChannel::from_matrix(theory, o));
        }
      }
      Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(d, d);
      reflect(0, 0) = -1.0;
      out.push_back(ReversibleChannel::from_matrix(theory, reflect));
      break;
    }
    case TheoryKind::Classical: {
      std::vector<int> cycle(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) cycle[static_cast<std::size_t>(j)] = (j + 1) % d;
      out.push_back(ReversibleChannel::permutation(theory, cycle));
      if (d >= 2) {
        std::vector<int> swap(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) swap[static_cast<std::size_t>(j)] = j;
        std::swap(swap[0], swap[1]);
        out.push_back(ReversibleChannel::permutation(theory, swap));
      }
      break;
    }
    case TheoryKind::Gbit:
      out.push_back(ReversibleChannel::dihedral(1));
      out.push_back(ReversibleChannel::dihedral(4));
      break;
  }
  return out;
}

}  // namespace gpt
