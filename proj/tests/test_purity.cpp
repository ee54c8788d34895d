#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "gpt_spectra/purity.hpp"
#include "gpt_spectra/random.hpp"
#include "test_util.hpp"

using namespace gpt;
using Catch::Approx;
using testing::has_code;
using testing::qdiag;
using testing::cvec;

namespace {

std::vector<double> spectrum_of(const State& s) { return diagonalize(s).padded(static_cast<std::size_t>(s.theory().dim())); }

Theory random_model(Rng& rng) {
  return uniform_int(rng, 0, 1) == 0 ? Theory::quantum_real(uniform_int(rng, 2, 5))
                                     : Theory::classical(uniform_int(rng, 2, 8));
}

}  // namespace

TEST_CASE("rare channel validation", "[purity]") {
  const Theory q2 = Theory::quantum_real(2);
  const auto id = ReversibleChannel::identity(q2);
  CHECK_THROWS_AS(RaReChannel({0.5, 0.4}, {id, id}), Error);
  CHECK_THROWS_AS(RaReChannel({1.2, -0.2}, {id, id}), Error);
  CHECK_THROWS_AS(RaReChannel({1.0}, {}), Error);
  CHECK(RaReChannel::single(id).size() == 1);
}

TEST_CASE("apply_rare examples", "[purity]") {
  const Theory q2 = Theory::quantum_real(2);
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const RaReChannel r({0.5, 0.5}, {ReversibleChannel::identity(q2), ReversibleChannel::from_matrix(q2, swap)});
  CHECK(apply_rare(r, qdiag({0.9, 0.1})).max_abs_diff(qdiag({0.5, 0.5})) <= 1e-15);

  const Theory c3 = Theory::classical(3);
  const RaReChannel cycle = RaReChannel::single(ReversibleChannel::permutation(c3, {1, 2, 0}));
  CHECK(apply_rare(cycle, cvec({0.5, 0.3, 0.2})).max_abs_diff(cvec({0.2, 0.5, 0.3})) <= 1e-15);

  CHECK_THROWS_MATCHES(apply_rare(r, cvec({0.5, 0.5})), Error, has_code(ErrorCode::DimensionMismatch));
}

TEST_CASE("composition of rare channels", "[purity]") {
  const Theory q3 = Theory::quantum_real(3);
  const RaReChannel a = random_rare(q3, 3, 1);
  const RaReChannel b = random_rare(q3, 2, 2);
  const RaReChannel ab = compose(a, b);
  CHECK(ab.size() == 6);
  Rng rng(3);
  const State rho = random_state(q3, rng);
  CHECK(apply_rare(ab, rho).max_abs_diff(apply_rare(a, apply_rare(b, rho))) <= 1e-12);
}

TEST_CASE("random_rare is seeded", "[purity]") {
  const Theory q3 = Theory::quantum_real(3);
  const RaReChannel a = random_rare(q3, 4, 11);
  const RaReChannel b = random_rare(q3, 4, 11);
  CHECK(a.weights() == b.weights());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.channels()[k] == b.channels()[k]);
  CHECK(std::abs(std::accumulate(a.weights().begin(), a.weights().end(), 0.0) - 1.0) <= 1e-15);
  CHECK_FALSE(random_rare(q3, 4, 12).weights() == a.weights());
  CHECK_THROWS_AS(random_rare(q3, 0, 1), Error);
}

TEST_CASE("is_more_mixed examples", "[purity]") {
  SECTION("a state against itself") {
    const State rho = qdiag({0.6, 0.3, 0.1});
    const auto cert = is_more_mixed(rho, rho);
    CHECK(cert.verdict == MixednessVerdict::EquallyMixed);
    REQUIRE(cert.reversible);
    CHECK(cert.residual_error <= 1e-12);
  }
  SECTION("invariant state is more mixed than a pure state") {
    const Theory q3 = Theory::quantum_real(3);
    const auto cert = is_more_mixed(invariant_state(q3), qdiag({0, 1, 0}));
    CHECK(cert.verdict == MixednessVerdict::MoreMixed);
    REQUIRE(cert.rare);
    CHECK(cert.residual_error <= 1e-8);
  }
  SECTION("purer target is refused") {
    const auto cert = is_more_mixed(qdiag({0.8, 0.2}), qdiag({0.6, 0.4}));
    CHECK(cert.verdict == MixednessVerdict::NotMoreMixed);
    CHECK(cert.violating_index == std::optional<std::size_t>(1));
    CHECK_FALSE(cert.rare);
  }
  SECTION("classical") {
    const auto cert = is_more_mixed(cvec({0.3, 0.4, 0.3}), cvec({0.1, 0.1, 0.8}));
    CHECK(cert.verdict == MixednessVerdict::MoreMixed);
    CHECK(cert.residual_error <= 1e-8);
  }
  SECTION("gbit is not diagonalizable") {
    CHECK_THROWS_MATCHES(is_more_mixed(gbit_state(0, 0), gbit_state(0.5, 0.5)), Error,
                         has_code(ErrorCode::NotDiagonalizable));
  }
}

TEST_CASE("synthesize_rare examples", "[purity]") {
  const Theory q3 = Theory::quantum_real(3);
  Rng rng_sigma(3);
  Rng rng_rho(4);
  const State sigma = quantum_state_with(q3, {0.6, 0.3, 0.1}, random_orthogonal(3, rng_sigma));
  const State rho = quantum_state_with(q3, {0.5, 0.3, 0.2}, random_orthogonal(3, rng_rho));
  const RaReChannel r = synthesize_rare(rho, sigma);
  CHECK(r.size() <= 5);
  CHECK(apply_rare(r, sigma).max_abs_diff(rho) <= 1e-8);
  CHECK_THROWS_MATCHES(synthesize_rare(sigma, rho), Error, has_code(ErrorCode::NotMajorized));
}

TEST_CASE("rare channels only make states more mixed", "[purity][property]") {
  Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    const Theory theory = random_model(rng);
    const State sigma = random_state(theory, rng);
    const RaReChannel r = random_rare(theory, uniform_int(rng, 1, 4), rng());
    const State rho = apply_rare(r, sigma);
    const Spectrum p = Spectrum::sorted(spectrum_of(rho));
    const Spectrum q = Spectrum::sorted(spectrum_of(sigma));
    CHECK(majorizes(q, p));
  }
}

TEST_CASE("majorized spectra are reached by a synthesized channel", "[purity][property]") {
  Rng rng(202);
  for (int t = 0; t < 100; ++t) {
    const Theory theory = random_model(rng);
    const int d = theory.dim();
    const State sigma = random_state(theory, rng);
    const auto q = spectrum_of(sigma);
    const Eigen::VectorXd pv = random_doubly_stochastic(d, 3, rng) * Eigen::Map<const Eigen::VectorXd>(q.data(), d);
    std::vector<double> p(pv.data(), pv.data() + d);
    std::sort(p.begin(), p.end(), std::greater<>());
    State rho = theory.is_quantum() ? quantum_state_with(theory, p, random_orthogonal(d, rng))
                                    : apply_channel(random_reversible(theory, rng), classical_state(pv));
    const RaReChannel r = synthesize_rare(rho, sigma);
    CHECK(r.size() <= static_cast<std::size_t>((d - 1) * (d - 1) + 1));
    CHECK(apply_rare(r, sigma).max_abs_diff(rho) <= 1e-8);
  }
}

TEST_CASE("equal spectra are connected by a reversible channel", "[purity][property]") {
  Rng rng(303);
  for (int t = 0; t < 100; ++t) {
    const Theory theory = random_model(rng);
    const State sigma = random_state(theory, rng);
    const State rho = apply_channel(random_reversible(theory, rng), sigma);
    const auto cert = is_more_mixed(rho, sigma);
    CHECK(cert.verdict == MixednessVerdict::EquallyMixed);
    REQUIRE(cert.reversible);
    CHECK(apply_channel(*cert.reversible, sigma).max_abs_diff(rho) <= 1e-8);
  }
}

TEST_CASE("more-mixed is a preorder with invariant bottom and pure top", "[purity][property]") {
  Rng rng(404);
  for (int t = 0; t < 60; ++t) {
    const Theory theory = random_model(rng);
    const State a = random_state(theory, rng);
    CHECK(is_more_mixed(a, a).verdict != MixednessVerdict::NotMoreMixed);

    const State b = apply_rare(random_rare(theory, 2, rng()), a);
    const State c = apply_rare(random_rare(theory, 2, rng()), b);
    CHECK(is_more_mixed(b, a).verdict != MixednessVerdict::NotMoreMixed);
    CHECK(is_more_mixed(c, b).verdict != MixednessVerdict::NotMoreMixed);
    CHECK(is_more_mixed(c, a).verdict != MixednessVerdict::NotMoreMixed);

    CHECK(is_more_mixed(invariant_state(theory), a).verdict != MixednessVerdict::NotMoreMixed);
    const State pure = diagonalize(a).pure_states.front();
    CHECK(is_more_mixed(a, pure).verdict != MixednessVerdict::NotMoreMixed);
  }
}
