#include <doctest.h>

#include <cmath>

#include "sssi/errors.hpp"
#include "sssi/verify.hpp"

using namespace sssi;

namespace {

const FourierSeries kCos{0.0, {{1, 1.0, 0.0}}};

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("stationary increments") {
    const auto probes = default_probes();
    const std::vector<double> shifts{0.5, 1.0, 2.0, 5.0};
    for (const FamilySpec& spec : {FamilySpec{Lfsm{1.5, 0.7, 1.0, -0.5}}, FamilySpec{Chentsov{1.25, 0.5}}}) {
      const auto r = check_stationary_increments(build(spec), std::span(probes).first(3), shifts);
      INFO(family_name(spec) << " " << r.message);
      CHECK(r.passed);
      CHECK(r.refinement_trace.size() == 2);
      CHECK(r.max_residual() < 1e-3);
    }
  }

  TEST_CASE("self-similarity fit") {
    const auto probes = default_probes();
    const std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
    const auto r = check_self_similar(build(Lfsm{1.5, 0.7, 1.0, 0.0}), std::span(probes).first(3), scales);
    CHECK(r.passed);
    REQUIRE(r.fitted_hurst);
    CHECK(*r.fitted_hurst == doctest::Approx(0.7).epsilon(1e-3));

    const auto ch = check_self_similar(build(Chentsov{0.5, 0.6}), std::span(probes).first(2), scales);
    CHECK(ch.passed);
    CHECK(*ch.fitted_hurst == doctest::Approx(1.2).epsilon(1e-2));
  }

  TEST_CASE("negative control: a perturbed exponent against the unperturbed H") {
    const auto probes = default_probes();
    const std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
    const double claimed = hurst_of(TruncatedFractional{1.5, 0.5, 0.5});
    const auto r = check_self_similar(build(TruncatedFractional{1.5, 0.5, 0.55}), std::span(probes).first(1), scales,
                                      0.01, {}, claimed);
    CHECK_FALSE(r.passed);
    CHECK(r.max_residual() > 0.01);
  }

  TEST_CASE("scaling maps hold pointwise") {
    const std::vector<double> scales{0.25, 0.5, 2.0, 4.0};
    for (const FamilySpec& spec : {FamilySpec{TruncatedFractional{1.5, 0.5, 0.5}}, FamilySpec{Chentsov{1.25, 0.5}},
                                   FamilySpec{Lfsm{1.5, 0.7, 1.0, -1.0}},
                                   FamilySpec{MixedLfsm{1.2, 0.4, {{{1.0, 0.0}, 1.0}, {{0.3, -2.0}, 0.5}}}}}) {
      const auto r = check_scaling_maps(spec, scales);
      INFO(family_name(spec) << " " << r.message);
      CHECK(r.passed);
      CHECK(r.max_residual() < 1e-12);
    }
  }

  TEST_CASE("declared exponents") {
    const auto t = declared_scaling(TruncatedFractional{1.5, 0.5, 0.25});
    CHECK(t.beta1 == 0.5);
    CHECK(t.beta2 == -0.25);
    const auto c = declared_scaling(Chentsov{1.25, 0.5});
    CHECK(c.beta1 == 0.0);
    CHECK(c.beta2 == -0.5);
    CHECK_THROWS_AS(declared_scaling(LogFractional{1.5, 1.0}), UnsupportedError);
    CHECK_THROWS_AS(declared_scaling(RotatingAverage{1.5, 0.8, kCos}), UnsupportedError);
  }

  TEST_CASE("kernel identity fixtures") {
    const auto rot = check_kernel_identity(build(RotatingAverage{1.5, 0.8, kCos}), IdentityFixture::rotating_average);
    CHECK(rot.passed);
    for (const FamilySpec& spec : {FamilySpec{Lfsm{1.5, 0.7, 1.0, -0.5}}, FamilySpec{LinearMotion{1.5, 1.0, 0.5}},
                                   FamilySpec{MixedLfsm{1.5, 0.3, {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 2.0}}}}}) {
      const auto r = check_kernel_identity(build(spec), IdentityFixture::lamperti);
      INFO(family_name(spec) << " " << r.message);
      CHECK(r.passed);
      CHECK(r.max_residual() < 1e-10);
    }
    CHECK_THROWS_AS(check_kernel_identity(build(Chentsov{1.25, 0.5}), IdentityFixture::lamperti), UnsupportedError);
    CHECK_THROWS_AS(check_kernel_identity(build(Lfsm{}), IdentityFixture::rotating_average), UnsupportedError);
  }

  TEST_CASE("mc check") {
    CHECK(mc_tolerance(10000) == doctest::Approx(0.03));
    CHECK(mc_tolerance(10000, 0.02) == doctest::Approx(0.05));
    const Kernel k = build(LinearMotion{1.5, 1.0, 0.0});
    const std::vector<double> times{0.5, 1.0, 2.0};
    const auto e = simulate(k, times, 4000, 9);
    const std::vector<LinearCombo> probes{{{{0.0, 1.0}}}, {{{1.0, 1.0}}}, {{{0.5, 0.5}, {-0.5, 2.0}}}};
    const auto r = mc_distribution_check(e, k, probes, mc_tolerance(4000, 0.02));
    CHECK(r.passed);
    CHECK(r.residuals.front() < 1e-15);
  }
}
