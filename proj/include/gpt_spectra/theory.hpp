#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "gpt_spectra/error.hpp"
#include "gpt_spectra/tolerance.hpp"

namespace gpt {

enum class TheoryKind { QuantumReal, Classical, Gbit };

/// A finite-dimensional probabilistic theory, restricted to a single system.
///
/// Three models are supported: real quantum theory on R^d (states are real
/// symmetric density matrices), classical probability on d outcomes (states
/// are probability vectors) and the gbit (square state space, states written
/// as (1, x, y) with |x|, |y| <= 1).
class Theory {
 public:
  static Theory quantum_real(int d) { return Theory(TheoryKind::QuantumReal, checked_dim(d)); }
  static Theory classical(int d) { return Theory(TheoryKind::Classical, checked_dim(d)); }
  static Theory gbit() { return Theory(TheoryKind::Gbit, 2); }

  /// Parses the identifiers used in state files.
  static Theory from_name(std::string_view name, int dim) {
    if (name == "quantum_real") return quantum_real(dim);
    if (name == "classical") return classical(dim);
    if (name == "gbit") {
      if (dim != 2) throw Error(ErrorCode::InvalidInput, "gbit has dim 2");
      return gbit();
    }
    throw Error(ErrorCode::InvalidInput, "unknown theory '" + std::string(name) + "'");
  }

  TheoryKind kind() const noexcept { return kind_; }
  bool is_quantum() const noexcept { return kind_ == TheoryKind::QuantumReal; }
  bool is_classical() const noexcept { return kind_ == TheoryKind::Classical; }
  bool is_gbit() const noexcept { return kind_ == TheoryKind::Gbit; }

  std::string_view name() const noexcept {
    switch (kind_) {
      case TheoryKind::QuantumReal: return "quantum_real";
      case TheoryKind::Classical: return "classical";
      case TheoryKind::Gbit: return "gbit";
    }
    return "";
  }

  /// Size parameter used in files: Hilbert dimension, number of outcomes, or 2.
  int dim() const noexcept { return d_; }

  /// Dimension of the real span of the states.
  int dim_linear() const noexcept {
    switch (kind_) {
      case TheoryKind::QuantumReal: return d_ * (d_ + 1) / 2;
      case TheoryKind::Classical: return d_;
      case TheoryKind::Gbit: return 3;
    }
    return 0;
  }

  /// Size of a maximal set of perfectly distinguishable pure states.
  int dim_operational() const noexcept { return d_; }

  /// Number of stored coordinates. Quantum states keep the full d x d matrix.
  Eigen::Index coord_length() const noexcept {
    switch (kind_) {
      case TheoryKind::QuantumReal: return static_cast<Eigen::Index>(d_) * d_;
      case TheoryKind::Classical: return d_;
      case TheoryKind::Gbit: return 3;
    }
    return 0;
  }

  bool has_unique_dagger() const noexcept { return kind_ != TheoryKind::Gbit; }
  bool has_purification() const noexcept { return kind_ == TheoryKind::QuantumReal; }
  bool pure_effects_finite() const noexcept { return kind_ != TheoryKind::QuantumReal; }

  friend bool operator==(const Theory&, const Theory&) = default;

 private:
  Theory(TheoryKind kind, int d) : kind_(kind), d_(d) {}

  static int checked_dim(int d) {
    if (d < 1) throw Error(ErrorCode::InvalidInput, "dimension must be positive");
    return d;
  }

  TheoryKind kind_;
  int d_;
};

struct StateTag {};
struct EffectTag {};

/// A coordinate vector in a theory's linear representation. States and effects
/// share the layout and differ only in the tag.
template <class Tag>
class Element {
 public:
  Element(Theory theory, Eigen::VectorXd coords) : theory_(theory), coords_(std::move(coords)) {
    if (coords_.size() != theory_.coord_length())
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(theory_.coord_length()) + " coordinates, got " +
                      std::to_string(coords_.size()));
  }

  /// Quantum only: builds from a d x d symmetric matrix.
  static Element from_matrix(Theory theory, const Eigen::MatrixXd& m) {
    if (!theory.is_quantum()) throw Error(ErrorCode::InvalidInput, "from_matrix needs the quantum model");
    if (m.rows() != theory.dim() || m.cols() != theory.dim())
      throw Error(ErrorCode::DimensionMismatch, "matrix size does not match the theory dimension");
    const double tol = tolerances().symmetry;
    if (((m - m.transpose()).cwiseAbs().maxCoeff()) > tol)
      throw Error(ErrorCode::NotSymmetric, "quantum elements must be symmetric");
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    return Element(theory, Eigen::Map<const Eigen::VectorXd>(sym.data(), sym.size()));
  }

  const Theory& theory() const noexcept { return theory_; }
  const Eigen::VectorXd& coords() const noexcept { return coords_; }

  /// Quantum only: the d x d matrix.
  Eigen::MatrixXd matrix() const {
    if (!theory_.is_quantum()) throw Error(ErrorCode::InvalidInput, "matrix() needs the quantum model");
    return Eigen::Map<const Eigen::MatrixXd>(coords_.data(), theory_.dim(), theory_.dim());
  }

  Element scaled(double factor) const { return Element(theory_, coords_ * factor); }

  friend Element operator+(const Element& a, const Element& b) {
    require_same(a.theory_, b.theory_);
    return Element(a.theory_, a.coords_ + b.coords_);
  }
  friend Element operator-(const Element& a, const Element& b) {
    require_same(a.theory_, b.theory_);
    return Element(a.theory_, a.coords_ - b.coords_);
  }
  friend Element operator*(double s, const Element& a) { return a.scaled(s); }

  double max_abs_diff(const Element& other) const {
    require_same(theory_, other.theory_);
    return (coords_ - other.coords_).cwiseAbs().maxCoeff();
  }

 private:
  static void require_same(const Theory& a, const Theory& b) {
    if (!(a == b)) throw Error(ErrorCode::DimensionMismatch, "elements belong to different theories");
  }

  Theory theory_;
  Eigen::VectorXd coords_;
};

using State = Element<StateTag>;
using Effect = Element<EffectTag>;

inline State classical_state(const Eigen::VectorXd& p) {
  return State(Theory::classical(static_cast<int>(p.size())), p);
}

inline State gbit_state(double x, double y) { return State(Theory::gbit(), Eigen::Vector3d(1.0, x, y)); }

inline Effect gbit_effect(double c, double a, double b) {
  return Effect(Theory::gbit(), Eigen::Vector3d(c, a, b));
}

/// Probability (a|rho). Values within the clamp band of [0, 1] are snapped.
inline double pair(const Effect& a, const State& rho) {
  if (!(a.theory() == rho.theory()))
    throw Error(ErrorCode::DimensionMismatch, "effect and state belong to different systems");
  const double raw = a.coords().dot(rho.coords());
  const double band = tolerances().pairing_clamp;
  if (raw < -band || raw > 1.0 + band)
    throw Error(ErrorCode::OutOfRange, "pairing value " + std::to_string(raw) + " is not a probability");
  if (raw < 0.0) return 0.0;
  if (raw > 1.0) return 1.0;
  return raw;
}

inline Effect deterministic_effect(const Theory& theory) {
  switch (theory.kind()) {
    case TheoryKind::QuantumReal:
      return Effect::from_matrix(theory, Eigen::MatrixXd::Identity(theory.dim(), theory.dim()));
    case TheoryKind::Classical:
      return Effect(theory, Eigen::VectorXd::Ones(theory.dim()));
    case TheoryKind::Gbit:
      return gbit_effect(1.0, 0.0, 0.0);
  }
  throw Error(ErrorCode::InvalidInput, "unknown theory");
}

/// (u|rho), unclamped.
inline double norm(const State& rho) { return deterministic_effect(rho.theory()).coords().dot(rho.coords()); }

inline bool is_normalized(const State& rho) {
  return std::abs(norm(rho) - 1.0) <= tolerances().normalization;
}

inline void require_normalized(const State& rho) {
  if (!is_normalized(rho))
    throw Error(ErrorCode::NotNormalized, "(u|rho) = " + std::to_string(norm(rho)));
}

inline State invariant_state(const Theory& theory) {
  switch (theory.kind()) {
    case TheoryKind::QuantumReal:
      return State::from_matrix(theory, Eigen::MatrixXd::Identity(theory.dim(), theory.dim()) / theory.dim());
    case TheoryKind::Classical:
      return State(theory, Eigen::VectorXd::Constant(theory.dim(), 1.0 / theory.dim()));
    case TheoryKind::Gbit:
      return gbit_state(0.0, 0.0);
  }
  throw Error(ErrorCode::InvalidInput, "unknown theory");
}

/// Corners of the gbit square in counter-clockwise order starting at (1, 1).
inline std::vector<State> gbit_corners() {
  return {gbit_state(1, 1), gbit_state(-1, 1), gbit_state(-1, -1), gbit_state(1, -1)};
}

/// Nontrivial extreme effects of the gbit: 1/2 (1 +- x) and 1/2 (1 +- y).
inline std::vector<Effect> gbit_edge_effects() {
  return {gbit_effect(0.5, 0.5, 0.0), gbit_effect(0.5, -0.5, 0.0), gbit_effect(0.5, 0.0, 0.5),
          gbit_effect(0.5, 0.0, -0.5)};
}

inline State classical_vertex(const Theory& theory, int k) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theory.dim());
  v(k) = 1.0;
  return State(theory, v);
}

inline Effect classical_indicator(const Theory& theory, int k) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theory.dim());
  v(k) = 1.0;
  return Effect(theory, v);
}

inline State projector_state(const Theory& theory, const Eigen::VectorXd& v) {
  return State::from_matrix(theory, v * v.transpose());
}

inline Effect projector_effect(const Theory& theory, const Eigen::VectorXd& v) {
  return Effect::from_matrix(theory, v * v.transpose());
}

/// Extreme points used for finite checks. Classical and gbit lists are exact;
/// the quantum list is a finite set of pure states spanning the symmetric
/// matrices (projectors on e_i and (e_i + e_j)/sqrt 2).
inline std::vector<State> extreme_states(const Theory& theory) {
  std::vector<State> out;
  switch (theory.kind()) {
    case TheoryKind::Classical:
      for (int k = 0; k < theory.dim(); ++k) out.push_back(classical_vertex(theory, k));
      break;
    case TheoryKind::Gbit:
      out = gbit_corners();
      break;
    case TheoryKind::QuantumReal: {
      const int d = theory.dim();
      for (int i = 0; i < d; ++i) out.push_back(projector_state(theory, Eigen::VectorXd::Unit(d, i)));
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          out.push_back(projector_state(
              theory, (Eigen::VectorXd::Unit(d, i) + Eigen::VectorXd::Unit(d, j)) / std::sqrt(2.0)));
      break;
    }
  }
  return out;
}

/// Eigenvalues of a quantum element in ascending order.
inline Eigen::VectorXd quantum_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Membership in the (unnormalized) state cone.
inline bool in_cone(const State& rho) {
  const auto& tol = tolerances();
  switch (rho.theory().kind()) {
    case TheoryKind::QuantumReal:
      return quantum_eigenvalues(rho.matrix()).minCoeff() >= -tol.cone;
    case TheoryKind::Classical:
      return rho.coords().minCoeff() >= -tol.cone_polytope;
    case TheoryKind::Gbit: {
      const double c = rho.coords()(0);
      return c >= -tol.cone_polytope && std::abs(rho.coords()(1)) <= c + tol.cone_polytope &&
             std::abs(rho.coords()(2)) <= c + tol.cone_polytope;
    }
  }
  return false;
}

/// A valid state: in the cone with 0 <= (u|rho) <= 1.
inline bool is_valid_state(const State& rho) {
  const double n = norm(rho);
  return in_cone(rho) && n >= -tolerances().normalization && n <= 1.0 + tolerances().normalization;
}

inline void require_valid_state(const State& rho) {
  if (!is_valid_state(rho)) throw Error(ErrorCode::NotInCone, "state lies outside the state space");
}

/// 0 <= (a|rho) <= 1 on every normalized state, checked on the extreme states
/// (through the spectrum for the quantum model).
inline bool is_valid_effect(const Effect& a) {
  const double band = tolerances().pairing_clamp;
  if (a.theory().is_quantum()) {
    const Eigen::VectorXd ev = quantum_eigenvalues(a.matrix());
    return ev.minCoeff() >= -band && ev.maxCoeff() <= 1.0 + band;
  }
  for (const State& s : extreme_states(a.theory())) {
    const double v = a.coords().dot(s.coords());
    if (v < -band || v > 1.0 + band) return false;
  }
  return true;
}

}  // namespace gpt
