#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "gpt_spectra/eigensolve.hpp"
#include "gpt_spectra/random.hpp"
#include "gpt_spectra/spectral.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gpt;
using Catch::Approx;
using testing::has_code;
using testing::qdiag;
using testing::qmatrix;
using testing::cvec;

TEST_CASE("p_star examples", "[spectral]") {
  CHECK(p_star(qdiag({0.7, 0.3})) == Approx(0.7).margin(1e-15));
  Eigen::MatrixXd m(2, 2);
  m << 0.6, 0.2, 0.2, 0.4;
  CHECK(p_star(qmatrix(m)) == Approx(0.5 + std::sqrt(0.05)).margin(1e-14));
  CHECK(p_star(qmatrix(m)) == Approx(0.7236067977499789).margin(1e-14));
  CHECK(p_star(cvec({0.2, 0.5, 0.3})) == Approx(0.5).margin(1e-15));
  CHECK(p_star(gbit_state(0.5, -0.2)) == Approx(0.75).margin(1e-15));
  CHECK(p_star(invariant_state(Theory::quantum_real(4))) == Approx(0.25).margin(1e-14));
}

TEST_CASE("peel examples", "[spectral]") {
  SECTION("classical") {
    const PeelStep step = peel(cvec({0.5, 0.3, 0.2}));
    CHECK(step.p_star == Approx(0.5).margin(1e-15));
    REQUIRE(step.residual);
    CHECK(step.residual->max_abs_diff(cvec({0.0, 0.6, 0.4})) < 1e-14);
    CHECK(step.alpha.max_abs_diff(cvec({1, 0, 0})) < 1e-15);
  }
  SECTION("quantum diagonal") {
    const PeelStep step = peel(qdiag({0.2, 0.8}));
    CHECK(step.p_star == Approx(0.8).margin(1e-14));
    REQUIRE(step.residual);
    CHECK(step.residual->max_abs_diff(qdiag({1.0, 0.0})) < 1e-13);
  }
  SECTION("pure state stops at once") {
    const PeelStep step = peel(qdiag({0, 1, 0}));
    CHECK(step.p_star == 1.0);
    CHECK_FALSE(step.residual);
    CHECK(step.alpha_matches_state);
  }
  SECTION("gbit edge point") {
    const PeelStep step = peel(gbit_state(1, 0));
    CHECK(step.p_star == 1.0);
    CHECK_FALSE(step.residual);
    CHECK_FALSE(step.alpha_matches_state);
  }
  SECTION("unnormalized input") {
    CHECK_THROWS_MATCHES(peel(cvec({0.5, 0.2})), Error, has_code(ErrorCode::NotNormalized));
  }
}

TEST_CASE("diagonalize examples", "[spectral]") {
  SECTION("off-diagonal qubit") {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.4, 0.4, 0.5;
    const Diagonalization d = diagonalize(qmatrix(m));
    REQUIRE(d.eigenvalues.size() == 2);
    CHECK(d.eigenvalues[0] == Approx(0.9).margin(1e-12));
    CHECK(d.eigenvalues[1] == Approx(0.1).margin(1e-12));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(d.pure_states[0].max_abs_diff(projector_state(Theory::quantum_real(2), Eigen::Vector2d(s, s))) < 1e-12);
    CHECK(d.reconstruction_error <= 1e-12);
  }
  SECTION("classical sorts") {
    const Diagonalization d = diagonalize(cvec({0.1, 0.6, 0.3}));
    CHECK(testing::max_diff(d.eigenvalues, {0.6, 0.3, 0.1}) < 1e-14);
    CHECK(d.pure_states[0].max_abs_diff(cvec({0, 1, 0})) < 1e-15);
  }
  SECTION("pure state has one eigenvalue and a full maximal set") {
    const Diagonalization d = diagonalize(qdiag({0, 0, 1}));
    CHECK(d.eigenvalues == std::vector<double>{1.0});
    CHECK(d.maximal_set.size() == 3);
    CHECK(d.test_effects.size() == 3);
    CHECK(d.padded(3) == std::vector<double>{1.0, 0.0, 0.0});
  }
  SECTION("invariant state") {
    const Diagonalization d = diagonalize(invariant_state(Theory::quantum_real(3)));
    REQUIRE(d.eigenvalues.size() == 3);
    for (double p : d.eigenvalues) CHECK(p == Approx(1.0 / 3).margin(1e-12));
  }
  SECTION("gbit is rejected") {
    CHECK_THROWS_MATCHES(diagonalize(gbit_state(0.5, 0.5)), Error, has_code(ErrorCode::NotDiagonalizable));
    CHECK_THROWS_MATCHES(diagonalize(gbit_state(1.0, 0.0)), Error, has_code(ErrorCode::NotDiagonalizable));
    CHECK_THROWS_MATCHES(diagonalize(gbit_state(0.0, 0.0)), Error, has_code(ErrorCode::NotDiagonalizable));
  }
}

TEST_CASE("verify_distinguishable examples", "[spectral]") {
  const Theory q4 = Theory::quantum_real(4);
  SECTION("computational basis") {
    std::vector<State> basis;
    for (int k = 0; k < 4; ++k) basis.push_back(projector_state(q4, testing::basis_vector(4, k)));
    const auto r = verify_distinguishable(basis);
    REQUIRE(std::holds_alternative<DistinguishabilityCertificate>(r));
    const auto& test = std::get<DistinguishabilityCertificate>(r).test;
    REQUIRE(test.size() == 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(pair(test.effects()[i], basis[j]) == Approx(i == j ? 1.0 : 0.0).margin(1e-15));
  }
  SECTION("partial set is closed up to a test") {
    const std::vector<State> two = {projector_state(q4, testing::basis_vector(4, 1)),
                                    projector_state(q4, testing::basis_vector(4, 3))};
    const auto r = verify_distinguishable(two);
    REQUIRE(std::holds_alternative<DistinguishabilityCertificate>(r));
    CHECK(std::get<DistinguishabilityCertificate>(r).test.size() == 4);
  }
  SECTION("duplicate state fails") {
    const State e0 = projector_state(q4, testing::basis_vector(4, 0));
    const auto r = verify_distinguishable({e0, e0});
    REQUIRE(std::holds_alternative<DistinguishabilityFailure>(r));
    const auto& f = std::get<DistinguishabilityFailure>(r);
    CHECK(f.effect_index == 0);
    CHECK(f.state_index == 1);
    CHECK(f.value == Approx(1.0).margin(1e-15));
  }
  SECTION("gbit opposite corners") {
    const auto r = verify_distinguishable({gbit_state(1, 1), gbit_state(-1, -1)});
    REQUIRE(std::holds_alternative<DistinguishabilityCertificate>(r));
    const auto& effects = std::get<DistinguishabilityCertificate>(r).test.effects();
    REQUIRE(effects.size() == 2);
    CHECK(effects[0].max_abs_diff(gbit_effect(0.5, 0.5, 0.0)) < 1e-15);
    CHECK(effects[1].max_abs_diff(gbit_effect(0.5, -0.5, 0.0)) < 1e-15);
  }
  SECTION("gbit adjacent corners are told apart by one edge effect") {
    const auto r = verify_distinguishable({gbit_state(1, 1), gbit_state(-1, 1)});
    REQUIRE(std::holds_alternative<DistinguishabilityCertificate>(r));
    CHECK(std::get<DistinguishabilityCertificate>(r).test.effects()[0].max_abs_diff(gbit_effect(0.5, 0.5, 0.0)) < 1e-15);
  }
  SECTION("gbit repeated corner fails") {
    const auto r = verify_distinguishable({gbit_state(1, 1), gbit_state(1, 1)});
    REQUIRE(std::holds_alternative<DistinguishabilityFailure>(r));
    CHECK(std::get<DistinguishabilityFailure>(r).state_index == 1);
  }
  SECTION("mixed state is rejected") {
    CHECK_THROWS_MATCHES(verify_distinguishable({qdiag({0.5, 0.5})}), Error, has_code(ErrorCode::NotPure));
  }
}

TEST_CASE("diagonalization reconstructs and is an eigen-decomposition", "[spectral][property]") {
  Rng rng(2024);
  for (int d = 2; d <= 6; ++d) {
    const Theory theory = Theory::quantum_real(d);
    for (int t = 0; t < 60; ++t) {
      const State rho = random_state(theory, rng);
      const Diagonalization diag = diagonalize(rho);
      CHECK(diag.reconstruction_error <= 1e-8);
      CHECK(is_observation_test(diag.test_effects));
      for (std::size_t i = 0; i + 1 < diag.eigenvalues.size(); ++i)
        CHECK(diag.eigenvalues[i] >= diag.eigenvalues[i + 1] - 1e-12);

      // independent check: cyclic Jacobi on the density matrix
      const auto eig = eigensolve_symmetric(rho.matrix());
      const std::vector<double> jacobi(eig.values.data(), eig.values.data() + d);
      CHECK(testing::max_diff(diag.padded(static_cast<std::size_t>(d)), jacobi) <= 1e-8);

      // each peeled state is an eigenvector of rho
      for (std::size_t i = 0; i < diag.pure_states.size(); ++i) {
        const Eigen::VectorXd v = pure_vector(diag.pure_states[i]);
        CHECK((rho.matrix() * v - diag.eigenvalues[i] * v).cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }
}

TEST_CASE("qubit eigenvalues agree with the closed form", "[spectral][property]") {
  Rng rng(99);
  for (int t = 0; t < 300; ++t) {
    const State rho = random_state(Theory::quantum_real(2), rng);
    const Eigen::MatrixXd m = rho.matrix();
    const auto [hi, lo] = oracle::eigen2(m(0, 0), m(0, 1), m(1, 1));
    const auto p = diagonalize(rho).padded(2);
    CHECK(p[0] == Approx(hi).margin(1e-10));
    CHECK(p[1] == Approx(std::max(lo, 0.0)).margin(1e-10));
  }
}

TEST_CASE("classical diagonalization sorts the probability vector", "[spectral][property]") {
  for (std::size_t d = 2; d <= 4; ++d)
    for (const auto& v : oracle::rational_vectors(d, 6)) {
      const State rho = classical_state(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(d)));
      std::vector<double> sorted = v;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      CHECK(testing::max_diff(diagonalize(rho).padded(d), sorted) <= 1e-12);
    }
}

TEST_CASE("peeling weights are monotone", "[spectral][property]") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const Theory theory = t % 2 == 0 ? Theory::quantum_real(4) : Theory::classical(6);
    State current = random_state(theory, rng);
    double previous = 2.0;
    double remaining = 1.0;
    for (int step = 0; step < theory.dim_operational(); ++step) {
      const PeelStep s = peel(current);
      const double weight = s.p_star * remaining;
      CHECK(weight <= previous + 1e-10);
      previous = weight;
      remaining *= 1.0 - s.p_star;
      if (!s.residual || remaining < 1e-9) break;
      current = *s.residual;
    }
  }
}

TEST_CASE("near-pure states with tiny eigenvalues", "[spectral][property]") {
  Rng rng(2718);
  for (int t = 0; t < 300; ++t) {
    const int d = uniform_int(rng, 2, 6);
    const double tiny = std::pow(10.0, -uniform_int(rng, 5, 13));
    std::vector<double> spectrum(static_cast<std::size_t>(d), 0.0);
    spectrum[0] = 1.0 - tiny;
    spectrum[1] = tiny;
    const State rho = quantum_state_with(Theory::quantum_real(d), spectrum, random_orthogonal(d, rng));
    const Diagonalization diag = diagonalize(rho);
    CHECK(testing::max_diff(diag.padded(static_cast<std::size_t>(d)), spectrum) <= 1e-8);
    CHECK(diag.reconstruction_error <= 1e-8);
  }
}
