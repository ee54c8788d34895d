#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpt_spectra/eigensolve.hpp"
#include "gpt_spectra/pure.hpp"
#include "gpt_spectra/theory.hpp"

namespace gpt {

/// rho = p_star * alpha + (1 - p_star) * residual.
struct PeelStep {
  double p_star;
  State alpha;
  Effect effect;                  // the maximizing pure effect
  std::optional<State> residual;  // absent once p_star reaches 1
  /// With p_star = 1 the state must coincide with alpha. False signals a
  /// maximizing effect whose unit face holds more than one state.
  bool alpha_matches_state = true;
};

struct Diagonalization {
  std::vector<double> eigenvalues;  // non-increasing
  std::vector<State> pure_states;
  std::vector<Effect> test_effects;  // a full observation-test
  std::vector<State> maximal_set;    // pure_states followed by their completion
  double reconstruction_error = 0.0;
  int steps = 0;

  /// Eigenvalues followed by zeros up to `length`.
  std::vector<double> padded(std::size_t length) const {
    std::vector<double> out = eigenvalues;
    if (out.size() < length) out.resize(length, 0.0);
    return out;
  }
};

inline double p_star(const State& rho) { return maximize_pure_effect(rho).p_star; }

namespace detail {

/// Renormalizes a residual after clamping float-noise cone violations.
///
/// `amplification` is 1 / (1 - p_star): the residual was divided by that
/// much, and so was the rounding noise in rho - p_star * alpha. The band is
/// applied before that division, so near-pure states with tiny genuine
/// eigenvalues are not mistaken for cone exits.
inline State clamp_residual(const State& sigma, double amplification = 1.0) {
  const Theory& theory = sigma.theory();
  const double cone = tolerances().cone * amplification;
  const double cone_polytope = tolerances().cone_polytope * amplification;
  switch (theory.kind()) {
    case TheoryKind::QuantumReal: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma.matrix());
      Eigen::VectorXd ev = es.eigenvalues();
      if (ev.minCoeff() < -cone)
        throw Error(ErrorCode::ResidualOutsideCone,
                    "residual eigenvalue " + std::to_string(ev.minCoeff()));
      if (ev.minCoeff() >= 0.0) return sigma;
      ev = ev.cwiseMax(0.0);
      Eigen::MatrixXd m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
      m /= m.trace();
      return State::from_matrix(theory, 0.5 * (m + m.transpose()));
    }
    case TheoryKind::Classical: {
      if (sigma.coords().minCoeff() < -cone_polytope)
        throw Error(ErrorCode::ResidualOutsideCone,
                    "residual entry " + std::to_string(sigma.coords().minCoeff()));
      Eigen::VectorXd p = sigma.coords().cwiseMax(0.0);
      return State(theory, p / p.sum());
    }
    case TheoryKind::Gbit: {
      Eigen::VectorXd c = sigma.coords();
      for (int k = 1; k < 3; ++k) {
        if (std::abs(c(k)) > 1.0 + cone_polytope) throw Error(ErrorCode::ResidualOutsideCone, "residual leaves the square");
        c(k) = std::clamp(c(k), -1.0, 1.0);
      }
      c(0) = 1.0;
      return State(theory, c);
    }
  }
  return sigma;
}

}  // namespace detail

/// One step of the operational diagonalization: strip the largest pure
/// component from rho and renormalize what is left.
inline PeelStep peel(const State& rho) {
  require_normalized(rho);
  const PureEffectMax best = maximize_pure_effect(rho);
  const double p = std::min(best.p_star, 1.0);
  PeelStep step{p, best.state, best.effect, std::nullopt, true};
  if (p >= 1.0 - tolerances().stop_weight) {
    step.p_star = 1.0;
    step.alpha_matches_state = rho.max_abs_diff(best.state) <= tolerances().purity;
    return step;
  }
  const State raw = (rho - p * best.state).scaled(1.0 / (1.0 - p));
  step.residual = detail::clamp_residual(raw, 1.0 / (1.0 - p));
  return step;
}

/// Diagonalizes rho by repeated peeling, accumulating the eigenvalues as
/// p_i = p*_i * prod_{j<i} (1 - p*_j).
///
/// Throws NotDiagonalizable when the model does not support the procedure
/// (non-unique daggers, residuals leaving the cone, too many steps) or when
/// the resulting pure states fail to be perfectly distinguishable.
inline Diagonalization diagonalize(const State& rho) {
  require_normalized(rho);
  const Theory& theory = rho.theory();
  const auto& tol = tolerances();
  const double total = norm(rho);

  Diagonalization out;
  std::vector<Effect> daggers;
  std::vector<Eigen::VectorXd> peeled;  // quantum only
  State current = rho;
  double remaining = 1.0;
  double cumulative = 0.0;
  bool finished = false;

  for (int i = 0; i < theory.dim_operational() && !finished; ++i) {
    PeelStep step = [&] {
      try {
        return peel(current);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ResidualOutsideCone) throw;
        // A step that already exhausts the weight of rho never uses its
        // residual, which is then mostly amplified rounding noise.
        const PureEffectMax best = maximize_pure_effect(current);
        if (cumulative + std::min(best.p_star, 1.0) * remaining < total - tol.stop_weight)
          throw Error(ErrorCode::NotDiagonalizable, std::string("peeling step ") + std::to_string(i + 1) + ": " + e.what());
        return PeelStep{std::min(best.p_star, 1.0), best.state, best.effect, std::nullopt, true};
      }
    }();
    if (!step.alpha_matches_state)
      throw Error(ErrorCode::NotDiagonalizable,
                  "a pure effect attains 1 on a state that is not pure (its unit face is not a single state)");
    Effect alpha_dagger = [&] {
      try {
        return dagger(step.alpha);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DaggerNotUnique)
          throw Error(ErrorCode::NotDiagonalizable, std::string("peeled pure state has no unique dagger: ") + e.what());
        throw;
      }
    }();
    // Checked on rho - p* alpha, before renormalization, for the same reason as the cone band.
    if (step.residual &&
        std::abs(alpha_dagger.coords().dot(step.residual->coords())) * (1.0 - step.p_star) > tol.distinguishability)
      throw Error(ErrorCode::NotDiagonalizable, "residual is not orthogonal to the peeled component");

    const double p_i = step.p_star * remaining;
    out.eigenvalues.push_back(p_i);
    out.pure_states.push_back(step.alpha);
    daggers.push_back(alpha_dagger);
    remaining *= 1.0 - step.p_star;
    cumulative += p_i;
    ++out.steps;

    if (!step.residual || cumulative >= total - tol.stop_weight) {
      finished = true;
    } else if (theory.is_quantum()) {
      // The residual lies in the face orthogonal to every peeled state; compress
      // it there so amplified rounding noise cannot leak back along them.
      peeled.push_back(pure_vector(step.alpha));
      Eigen::MatrixXd q = Eigen::MatrixXd::Identity(theory.dim(), theory.dim());
      for (const Eigen::VectorXd& v : peeled) q -= v * v.transpose();
      Eigen::MatrixXd m = q * step.residual->matrix() * q;
      m = 0.5 * (m + m.transpose());
      current = State::from_matrix(theory, m / m.trace());
    } else {
      current = *step.residual;
    }
  }
  if (!finished)
    throw Error(ErrorCode::NotDiagonalizable, "peeling did not terminate within the system dimension");

  for (std::size_t i = 0; i < out.pure_states.size(); ++i)
    for (std::size_t j = i + 1; j < out.pure_states.size(); ++j) {
      const double v = daggers[i].coords().dot(out.pure_states[j].coords());
      if (std::abs(v) > tol.distinguishability)
        throw Error(ErrorCode::NotDiagonalizable, "peeled pure states are not perfectly distinguishable");
    }

  out.maximal_set = complete_to_maximal(out.pure_states, theory);
  for (const State& s : out.maximal_set) out.test_effects.push_back(dagger(s));
  if (!is_observation_test(out.test_effects))
    throw Error(ErrorCode::NotDiagonalizable, "daggers of the maximal set do not form an observation-test");

  Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(theory.coord_length());
  for (std::size_t i = 0; i < out.eigenvalues.size(); ++i)
    rebuilt += out.eigenvalues[i] * out.pure_states[i].coords();
  out.reconstruction_error = (rho.coords() - rebuilt).cwiseAbs().maxCoeff();
  if (out.reconstruction_error > tol.reconstruction)
    throw Error(ErrorCode::NotDiagonalizable,
                "reconstruction error " + std::to_string(out.reconstruction_error));
  return out;
}

struct DistinguishabilityCertificate {
  ObservationTest test;
};

struct DistinguishabilityFailure {
  std::size_t effect_index;  // a_i
  std::size_t state_index;   // rho_j
  double value;              // (a_i | rho_j), which should have been delta_ij
};

using DistinguishabilityResult = std::variant<DistinguishabilityCertificate, DistinguishabilityFailure>;

/// Looks for an observation-test with (a_i|rho_j) = delta_ij, built from the
/// daggers of the states (or, on the gbit, from the edge effects) and closed
/// up to a full test.
inline DistinguishabilityResult verify_distinguishable(const std::vector<State>& states) {
  if (states.empty()) throw Error(ErrorCode::InvalidInput, "empty state list");
  const Theory theory = states.front().theory();
  for (const State& s : states) {
    if (!(s.theory() == theory)) throw Error(ErrorCode::DimensionMismatch, "states from different systems");
    require_pure(s);
  }
  const double tol = tolerances().distinguishability;
  const std::size_t n = states.size();

  std::vector<Effect> effects;
  if (theory.has_unique_dagger()) {
    for (const State& s : states) effects.push_back(dagger(s));
  } else {
    const auto candidates = gbit_edge_effects();
    for (std::size_t i = 0; i < n; ++i) {
      const Effect* chosen = nullptr;
      for (const Effect& e : candidates) {
        if (std::abs(e.coords().dot(states[i].coords()) - 1.0) > tol) continue;
        bool zero_elsewhere = true;
        for (std::size_t j = 0; j < n && zero_elsewhere; ++j)
          if (j != i) zero_elsewhere = std::abs(e.coords().dot(states[j].coords())) <= tol;
        if (zero_elsewhere) {
          chosen = &e;
          break;
        }
      }
      if (chosen == nullptr) {
        // Report the first unit effect on state i against the first state it fails to exclude.
        for (const Effect& e : candidates) {
          if (std::abs(e.coords().dot(states[i].coords()) - 1.0) > tol) continue;
          for (std::size_t j = 0; j < n; ++j)
            if (j != i && std::abs(e.coords().dot(states[j].coords())) > tol)
              return DistinguishabilityFailure{i, j, e.coords().dot(states[j].coords())};
        }
        return DistinguishabilityFailure{i, i, 0.0};
      }
      effects.push_back(*chosen);
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = effects[i].coords().dot(states[j].coords());
      if (std::abs(v - (i == j ? 1.0 : 0.0)) > tol) return DistinguishabilityFailure{i, j, v};
    }

  if (!is_observation_test(effects)) {
    if (theory.has_unique_dagger()) {
      const auto full = complete_to_maximal(states, theory);
      for (std::size_t k = n; k < full.size(); ++k) effects.push_back(dagger(full[k]));
    } else {
      Effect rest = deterministic_effect(theory);
      for (const Effect& e : effects) rest = rest - e;
      effects.push_back(rest);
    }
  }
  return DistinguishabilityCertificate{ObservationTest(std::move(effects))};
}

}  // namespace gpt
