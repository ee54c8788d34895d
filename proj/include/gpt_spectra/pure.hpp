#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "gpt_spectra/channel.hpp"
#include "gpt_spectra/theory.hpp"

namespace gpt {

namespace detail {

/// Flips v so that its first component with |c| > 1e-12 is positive.
inline Eigen::VectorXd first_nonzero_positive(Eigen::VectorXd v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-12) {
      if (v(k) < 0) v = -v;
      break;
    }
  }
  return v;
}

inline int classical_vertex_index(const State& s) {
  const double tol = tolerances().purity;
  int found = -1;
  for (Eigen::Index k = 0; k < s.coords().size(); ++k) {
    const double v = s.coords()(k);
    if (std::abs(v - 1.0) <= tol) {
      if (found >= 0) return -1;
      found = static_cast<int>(k);
    } else if (std::abs(v) > tol) {
      return -1;
    }
  }
  return found;
}

inline int gbit_corner_index(const State& s) {
  const double tol = tolerances().purity;
  const auto corners = gbit_corners();
  for (std::size_t k = 0; k < corners.size(); ++k)
    if (s.max_abs_diff(corners[k]) <= tol) return static_cast<int>(k);
  return -1;
}

}  // namespace detail

/// Pure normalized state test: rank one (quantum), a vertex (classical), a
/// corner (gbit).
inline bool is_pure(const State& s) {
  if (!is_normalized(s)) return false;
  switch (s.theory().kind()) {
    case TheoryKind::QuantumReal: {
      if (s.theory().dim() == 1) return true;
      const Eigen::VectorXd ev = quantum_eigenvalues(s.matrix());
      return ev(ev.size() - 2) <= tolerances().purity && ev.minCoeff() >= -tolerances().purity;
    }
    case TheoryKind::Classical:
      return detail::classical_vertex_index(s) >= 0;
    case TheoryKind::Gbit:
      return detail::gbit_corner_index(s) >= 0;
  }
  return false;
}

inline void require_pure(const State& s) {
  if (!is_pure(s)) throw Error(ErrorCode::NotPure, "state is not pure");
}

/// Unit vector v with alpha = v v^T, sign fixed by the first-nonzero-positive
/// convention.
inline Eigen::VectorXd pure_vector(const State& alpha) {
  if (!alpha.theory().is_quantum()) throw Error(ErrorCode::InvalidInput, "pure_vector needs the quantum model");
  require_pure(alpha);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(alpha.matrix());
  const Eigen::Index top = es.eigenvalues().size() - 1;
  return detail::first_nonzero_positive(es.eigenvectors().col(top).normalized());
}

struct PureEffectMax {
  double p_star;
  Effect effect;  // maximizing normalized pure effect a*
  State state;    // a pure state with (a*|alpha*) = 1
};

/// Maximum of (a|rho) over normalized pure effects.
///
/// Quantum: the top eigenpair (library eigensolver, so that the Jacobi solver
/// stays an independent check). Classical and gbit: enumeration of the finitely
/// many extreme effects, first maximizer in enumeration order.
inline PureEffectMax maximize_pure_effect(const State& rho) {
  require_normalized(rho);
  const Theory& theory = rho.theory();
  switch (theory.kind()) {
    case TheoryKind::QuantumReal: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.matrix());
      const Eigen::Index top = es.eigenvalues().size() - 1;
      const Eigen::VectorXd v = detail::first_nonzero_positive(es.eigenvectors().col(top).normalized());
      return {es.eigenvalues()(top), projector_effect(theory, v), projector_state(theory, v)};
    }
    case TheoryKind::Classical: {
      Eigen::Index k = 0;
      for (Eigen::Index i = 1; i < rho.coords().size(); ++i)
        if (rho.coords()(i) > rho.coords()(k)) k = i;
      return {rho.coords()(k), classical_indicator(theory, static_cast<int>(k)),
              classical_vertex(theory, static_cast<int>(k))};
    }
    case TheoryKind::Gbit: {
      const auto effects = gbit_edge_effects();
      std::size_t best = 0;
      double best_value = effects[0].coords().dot(rho.coords());
      for (std::size_t k = 1; k < effects.size(); ++k) {
        const double v = effects[k].coords().dot(rho.coords());
        if (v > best_value) {
          best = k;
          best_value = v;
        }
      }
      for (const State& corner : gbit_corners())
        if (std::abs(effects[best].coords().dot(corner.coords()) - 1.0) <= 1e-12)
          return {best_value, effects[best], corner};
      break;
    }
  }
  throw Error(ErrorCode::InvalidInput, "no maximizing pure effect");
}

/// The pure effect a with (a|alpha) = 1. Throws DaggerNotUnique on the gbit,
/// where every corner is attained by two edge effects.
inline Effect dagger(const State& alpha) {
  require_pure(alpha);
  const Theory& theory = alpha.theory();
  switch (theory.kind()) {
    case TheoryKind::QuantumReal:
      return projector_effect(theory, pure_vector(alpha));
    case TheoryKind::Classical:
      return classical_indicator(theory, detail::classical_vertex_index(alpha));
    case TheoryKind::Gbit: {
      int count = 0;
      for (const Effect& e : gbit_edge_effects())
        if (std::abs(e.coords().dot(alpha.coords()) - 1.0) <= 1e-12) ++count;
      throw Error(ErrorCode::DaggerNotUnique,
                  std::to_string(count) + " extreme effects take the value 1 on this corner");
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown theory");
}

/// True iff the effects are valid and sum to the deterministic effect.
inline bool is_observation_test(const std::vector<Effect>& effects) {
  if (effects.empty()) throw Error(ErrorCode::InvalidInput, "an observation-test needs at least one effect");
  const Theory theory = effects.front().theory();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(theory.coord_length());
  for (const Effect& e : effects) {
    if (!(e.theory() == theory)) throw Error(ErrorCode::DimensionMismatch, "effects on different systems");
    sum += e.coords();
  }
  if ((sum - deterministic_effect(theory).coords()).cwiseAbs().maxCoeff() > tolerances().test_sum) return false;
  for (const Effect& e : effects)
    if (!is_valid_effect(e)) return false;
  return true;
}

/// An ordered list of effects summing to the deterministic effect.
class ObservationTest {
 public:
  explicit ObservationTest(std::vector<Effect> effects) : effects_(std::move(effects)) {
    if (!is_observation_test(effects_))
      throw Error(ErrorCode::InvalidInput, "effects do not form an observation-test");
  }

  const std::vector<Effect>& effects() const noexcept { return effects_; }
  std::size_t size() const noexcept { return effects_.size(); }

 private:
  std::vector<Effect> effects_;
};

/// Extends a perfectly distinguishable set of pure states to a maximal one.
///
/// Quantum: Gram-Schmidt against the canonical basis vectors in index order.
/// Classical: missing vertices in index order. Gbit: the opposite corner (the
/// only maximal sets are the two diagonals).
inline std::vector<State> complete_to_maximal(const std::vector<State>& partial, const Theory& theory) {
  const int d = theory.dim_operational();
  if (static_cast<int>(partial.size()) > d)
    throw Error(ErrorCode::NotDistinguishable, "more states than the system dimension");
  for (const State& s : partial) {
    if (!(s.theory() == theory)) throw Error(ErrorCode::DimensionMismatch, "state from another system");
    require_pure(s);
  }
  std::vector<State> out = partial;

  switch (theory.kind()) {
    case TheoryKind::QuantumReal: {
      std::vector<Eigen::VectorXd> basis;
      for (const State& s : partial) basis.push_back(pure_vector(s));
      const double tol = tolerances().distinguishability;
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
          const double overlap = basis[i].dot(basis[j]);
          if (overlap * overlap > tol)
            throw Error(ErrorCode::NotDistinguishable, "pure states are not orthogonal");
        }
      for (int k = 0; k < theory.dim() && static_cast<int>(basis.size()) < d; ++k) {
        Eigen::VectorXd w = Eigen::VectorXd::Unit(theory.dim(), k);
        for (int pass = 0; pass < 2; ++pass)
          for (const Eigen::VectorXd& b : basis) w -= b.dot(w) * b;
        if (w.norm() <= 1e-6) continue;
        w = detail::first_nonzero_positive(w.normalized());
        basis.push_back(w);
        out.push_back(projector_state(theory, w));
      }
      break;
    }
    case TheoryKind::Classical: {
      std::vector<bool> used(static_cast<std::size_t>(d), false);
      for (const State& s : partial) {
        const auto k = static_cast<std::size_t>(detail::classical_vertex_index(s));
        if (used[k]) throw Error(ErrorCode::NotDistinguishable, "repeated vertex");
        used[k] = true;
      }
      for (int k = 0; k < d; ++k)
        if (!used[static_cast<std::size_t>(k)]) out.push_back(classical_vertex(theory, k));
      break;
    }
    case TheoryKind::Gbit: {
      const auto corners = gbit_corners();
      if (partial.empty()) {
        out = {corners[0], corners[2]};
      } else if (partial.size() == 1) {
        const int k = detail::gbit_corner_index(partial[0]);
        out.push_back(corners[static_cast<std::size_t>((k + 2) % 4)]);
      } else {
        const int a = detail::gbit_corner_index(partial[0]);
        const int b = detail::gbit_corner_index(partial[1]);
        if (a == b) throw Error(ErrorCode::NotDistinguishable, "repeated corner");
        if ((a + 2) % 4 != b) throw Error(ErrorCode::NotExtendable, "adjacent corners are not a maximal set");
      }
      break;
    }
  }
  if (static_cast<int>(out.size()) != d) throw Error(ErrorCode::NotExtendable, "completion came up short");
  return out;
}

/// A reversible channel mapping from[i] to to[i] for every i, if the model's
/// group contains one. Both lists must be maximal sets of pure states.
inline std::optional<ReversibleChannel> find_connecting_channel(const std::vector<State>& from,
                                                               const std::vector<State>& to) {
  if (from.size() != to.size() || from.empty())
    throw Error(ErrorCode::LengthMismatch, "state lists differ in length");
  const Theory theory = from.front().theory();
  if (static_cast<int>(from.size()) != theory.dim_operational())
    throw Error(ErrorCode::NotMaximal, "connecting channels need maximal sets");
  std::optional<ReversibleChannel> found;
  switch (theory.kind()) {
    case TheoryKind::QuantumReal: {
      const int d = theory.dim();
      Eigen::MatrixXd o = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t i = 0; i < from.size(); ++i) o += pure_vector(to[i]) * pure_vector(from[i]).transpose();
      try {
        found = ReversibleChannel::from_matrix(theory, o);
      } catch (const Error&) {
        return std::nullopt;
      }
      break;
    }
    case TheoryKind::Classical: {
      std::vector<int> perm(from.size(), -1);
      for (std::size_t i = 0; i < from.size(); ++i) {
        const int src = detail::classical_vertex_index(from[i]);
        const int dst = detail::classical_vertex_index(to[i]);
        if (src < 0 || dst < 0) throw Error(ErrorCode::NotPure, "classical maximal sets are vertices");
        perm[static_cast<std::size_t>(src)] = dst;
      }
      try {
        found = ReversibleChannel::permutation(theory, perm);
      } catch (const Error&) {
        return std::nullopt;
      }
      break;
    }
    case TheoryKind::Gbit:
      for (int g = 0; g < 8 && !found; ++g) {
        const ReversibleChannel candidate = ReversibleChannel::dihedral(g);
        bool ok = true;
        for (std::size_t i = 0; i < from.size() && ok; ++i)
          ok = apply_channel(candidate, from[i]).max_abs_diff(to[i]) <= tolerances().purity;
        if (ok) found = candidate;
      }
      break;
  }
  if (found) {
    for (std::size_t i = 0; i < from.size(); ++i)
      if (apply_channel(*found, from[i]).max_abs_diff(to[i]) > tolerances().distinguishability)
        return std::nullopt;
  }
  return found;
}

}  // namespace gpt
