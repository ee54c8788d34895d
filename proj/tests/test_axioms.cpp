#include <catch2/catch_amalgamated.hpp>

#include "gpt_spectra/axioms.hpp"
#include "test_util.hpp"

using namespace gpt;
using Catch::Approx;

TEST_CASE("quantum and classical models pass every check", "[axioms]") {
  for (const Theory& theory : {Theory::quantum_real(2), Theory::quantum_real(4), Theory::classical(3), Theory::classical(6)}) {
    const AxiomReport report = run_axiom_checks(theory, 10, 5);
    CHECK(report.failures() == 0);
    CHECK(report.checks.size() == 8);
    CHECK(report.dim == theory.dim());
  }
  const AxiomReport q = run_axiom_checks(Theory::quantum_real(3), 5, 1);
  CHECK(q.find("purification")->verdict == Verdict::Pass);
  CHECK(q.find("purity_preservation")->verdict == Verdict::Assumed);
  const AxiomReport c = run_axiom_checks(Theory::classical(3), 5, 1);
  CHECK(c.find("purification")->verdict == Verdict::NotChecked);
}

TEST_CASE("gbit fails unit state uniqueness on an edge", "[axioms]") {
  const AxiomReport report = run_axiom_checks(Theory::gbit(), 10, 5);
  const AxiomCheck* check = report.find("unit_state_uniqueness");
  REQUIRE(check);
  CHECK(check->verdict == Verdict::Fail);
  CHECK(check->note == "edge {(1, 1, y) : y in [-1, 1]}");
  CHECK(check->witness.at("effect") == std::vector<double>{0.5, 0.5, 0.0});
  CHECK(check->witness.count("face_vertex_1") == 1);
  CHECK(report.find("invariant_spectrum")->verdict == Verdict::Inapplicable);
  CHECK(report.find("maximal_test_purity")->verdict == Verdict::Inapplicable);
  CHECK(report.find("strong_symmetry")->verdict == Verdict::Pass);
  CHECK(report.find("causality_unique_deterministic_effect")->verdict == Verdict::Pass);
  CHECK(report.failures() == 1);
}

TEST_CASE("pure sharpness witnesses", "[axioms]") {
  for (const Theory& theory : {Theory::quantum_real(3), Theory::classical(4), Theory::gbit()}) {
    const AxiomCheck check = check_pure_sharpness(theory);
    REQUIRE(check.verdict == Verdict::Pass);
    const Effect a(theory, Eigen::Map<const Eigen::VectorXd>(check.witness.at("effect").data(),
                                                             static_cast<Eigen::Index>(check.witness.at("effect").size())));
    const State s(theory, Eigen::Map<const Eigen::VectorXd>(check.witness.at("state").data(),
                                                            static_cast<Eigen::Index>(check.witness.at("state").size())));
    CHECK(pair(a, s) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("invariant spectrum is flat", "[axioms]") {
  const AxiomCheck check = check_invariant_spectrum(Theory::quantum_real(5));
  CHECK(check.verdict == Verdict::Pass);
  for (double v : check.witness.at("eigenvalues")) CHECK(v == Approx(0.2).margin(1e-10));
}

TEST_CASE("strong symmetry counts its pairs", "[axioms]") {
  const AxiomCheck q = check_strong_symmetry(Theory::quantum_real(3), 12, 9);
  CHECK(q.verdict == Verdict::Pass);
  CHECK(q.witness.at("pairs_checked").front() >= 1.0);
  const AxiomCheck g = check_strong_symmetry(Theory::gbit(), 4, 9);
  CHECK(g.verdict == Verdict::Pass);
}

TEST_CASE("reports are deterministic in the seed", "[axioms]") {
  const AxiomReport a = run_axiom_checks(Theory::quantum_real(3), 8, 42);
  const AxiomReport b = run_axiom_checks(Theory::quantum_real(3), 8, 42);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].verdict == b.checks[i].verdict);
    CHECK(a.checks[i].witness == b.checks[i].witness);
  }
}
