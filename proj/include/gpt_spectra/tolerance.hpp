#pragma once

#include <cstdlib>
#include <string>

namespace gpt {

/// Numerical thresholds shared by every module. The active set is built once
/// from the defaults below, each multiplied by GPT_SPECTRA_TOL_SCALE when that
/// environment variable holds a positive number.
struct Tolerances {
  double cone = 1e-10;             // most negative admissible eigenvalue of a quantum state
  double cone_polytope = 1e-12;    // classical entries / gbit coordinates
  double pairing_clamp = 1e-10;
  double test_sum = 1e-9;
  double normalization = 1e-9;
  double purity = 1e-8;            // second eigenvalue of a rank-1 state
  double distinguishability = 1e-8;
  double symmetry = 1e-12;
  double stop_weight = 1e-12;      // peeling stops once this close to the full weight
  double reconstruction = 1e-8;
  double majorization = 1e-9;
  double doubly_stochastic = 1e-9;
  double birkhoff_support = 1e-10;
  double birkhoff_residual = 1e-9;
  double channel = 1e-10;          // orthogonality / group membership of reversible channels
  double pinv_cutoff = 1e-10;

  Tolerances scaled(double factor) const {
    Tolerances t = *this;
    for (double* v : {&t.cone, &t.cone_polytope, &t.pairing_clamp, &t.test_sum, &t.normalization,
                      &t.purity, &t.distinguishability, &t.symmetry, &t.stop_weight,
                      &t.reconstruction, &t.majorization, &t.doubly_stochastic,
                      &t.birkhoff_support, &t.birkhoff_residual, &t.channel, &t.pinv_cutoff}) {
      *v *= factor;
    }
    return t;
  }

  static double environment_scale() {
    const char* raw = std::getenv("GPT_SPECTRA_TOL_SCALE");
    if (raw == nullptr) return 1.0;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || !(v > 0.0)) return 1.0;
    return v;
  }
};

/// Read-only process-wide tolerances, fixed at first use.
inline const Tolerances& tolerances() {
  static const Tolerances active = Tolerances{}.scaled(Tolerances::environment_scale());
  return active;
}

}  // namespace gpt
