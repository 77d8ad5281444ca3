#include <doctest.h>

#include <cmath>

#include "sssi/errors.hpp"
#include "sssi/stable_core.hpp"

using namespace sssi;

namespace {

const LinearCombo kX1{{{1.0, 1.0}}};

double sigma(const FamilySpec& spec, const LinearCombo& combo = kX1) {
  const auto r = cf_exponent(build(spec), combo);
  REQUIRE(r.verdict == quad::Verdict::converged);
  return r.value;
}

const FourierSeries kCos{0.0, {{1, 1.0, 0.0}}};

}  // namespace

TEST_SUITE("cf_exponent") {
  // Reference values for sigma^alpha(X_1) from tests/oracles/cf_oracles.py
  // (independent scipy/mpmath quadrature), frozen here.
  TEST_CASE("frozen oracle values") {
    CHECK(sigma(Lfsm{1.5, 0.7, 1.0, 0.0}) == doctest::Approx(0.974377836244439).epsilon(1e-4));
    CHECK(sigma(LogFractional{1.5, 1.0}) == doctest::Approx(8.97975380564165).epsilon(1e-4));
    CHECK(sigma(TruncatedFractional{1.5, 0.5, 0.5}) == doctest::Approx(8.3229356).epsilon(1e-4));
    CHECK(sigma(Chentsov{1.25, 0.5}) == doctest::Approx(8.0 * std::sqrt(2.0)).epsilon(1e-4));
    CHECK(sigma(RotatingAverage{1.5, 0.8, kCos}) == doctest::Approx(12.518774697).epsilon(1e-5));
  }

  TEST_CASE("Chentsov closed form at t = 1") {
    // 4 (1/2)^beta / beta + 2 (1/2)^(beta-1) / (1 - beta)
    for (double beta : {0.3, 0.5, 0.8}) {
      const double expect = 4.0 * std::pow(0.5, beta) / beta + 2.0 * std::pow(0.5, beta - 1.0) / (1.0 - beta);
      CHECK(sigma(Chentsov{1.25, beta}) == doctest::Approx(expect).epsilon(1e-4));
    }
  }

  TEST_CASE("linear motion") {
    CHECK(sigma(LinearMotion{1.5, 1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sigma(LinearMotion{1.5, 1.0, 0.0}, {{{1.0, 2.0}}}) == doctest::Approx(2.0).epsilon(1e-9));
    // Independent increments: |1+1|^a on (0,1] plus |1|^a on (1,2].
    CHECK(sigma(LinearMotion{1.5, 1.0, 0.0}, {{{1.0, 1.0}, {1.0, 2.0}}}) ==
          doctest::Approx(std::pow(2.0, 1.5) + 1.0).epsilon(1e-9));
  }

  TEST_CASE("zero combination") {
    const auto r = cf_exponent(build(Lfsm{1.5, 0.7, 1.0, 0.0}), {{{0.0, 1.0}, {0.0, 2.0}}});
    CHECK(r.verdict == quad::Verdict::converged);
    CHECK(r.value == 0.0);
  }

  TEST_CASE("property: homogeneity in theta") {
    const std::vector<FamilySpec> specs{Lfsm{1.5, 0.7, 1.0, 0.0}, Chentsov{1.25, 0.5}, LogFractional{1.5, 1.0}};
    const auto probes = default_probes();
    for (const auto& spec : specs) {
      const Kernel k = build(spec);
      for (std::size_t i = 0; i < 3; ++i) {
        LinearCombo doubled = probes[i];
        for (auto& t : doubled.terms) t.theta *= 2.0;
        CHECK(cf_exponent_value(k, doubled) ==
              doctest::Approx(std::pow(2.0, k.alpha()) * cf_exponent_value(k, probes[i])).epsilon(1e-4));
      }
    }
  }

  TEST_CASE("increment kernel matches the difference of the source process") {
    const Kernel k = build(Lfsm{1.5, 0.7, 1.0, -0.5});
    const Kernel inc = make_increment_kernel(k, 0.75);
    CHECK(inc.is_increment());
    const double lhs = cf_exponent_value(inc, {{{1.0, 0.5}}});
    const double rhs = cf_exponent_value(k, {{{1.0, 1.25}, {-1.0, 0.5}}});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
  }

  TEST_CASE("single-atom mixed LFSM equals LFSM") {
    const double a = sigma(Lfsm{1.5, 0.7, 1.0, 0.0}, default_probes()[6]);
    const double b = sigma(MixedLfsm{1.5, 0.7, {{{1.0, 0.0}, 1.0}}}, default_probes()[6]);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }

  TEST_CASE("two mirrored atoms equal one symmetric atom") {
    // sigma is even in b, so atoms (1,0) and (0,1) of weight 1/2 match (1,0) of weight 1.
    const double a = sigma(Lfsm{1.5, 0.7, 1.0, 0.0});
    const double b = sigma(MixedLfsm{1.5, 0.7, {{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.5}}});
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }

  TEST_CASE("divergent integrand is reported, not valued") {
    const Kernel k = build_unvalidated(TruncatedFractional{1.5, 0.5, 0.9});
    const auto r = cf_exponent(k, kX1);
    CHECK(r.verdict != quad::Verdict::converged);
    CHECK_THROWS_AS(cf_exponent_value(k, kX1), DivergenceError);
  }
}
