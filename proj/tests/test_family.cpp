#include <doctest.h>

#include <cmath>

#include "sssi/errors.hpp"
#include "sssi/family.hpp"
#include "sssi/kernel.hpp"

using namespace sssi;

TEST_SUITE("family") {
  TEST_CASE("admissibility examples") {
    const auto bad = validate(TruncatedFractional{1.5, 0.5, 0.9});
    CHECK_FALSE(bad.ok);
    CHECK(bad.violated.find("< b <") != std::string::npos);
    CHECK(validate(TruncatedFractional{1.5, 0.5, 0.5}).ok);
    CHECK(validate(TruncatedFractional{1.5, -0.5, -0.2}).ok);
    CHECK_FALSE(validate(TruncatedFractional{1.5, 0.0, 0.0}).ok);
    // alpha = 1 leaves no room on the upper branch: 0 < b < a and b > a.
    CHECK_FALSE(validate(TruncatedFractional{1.0, 0.5, 0.25}).ok);
    CHECK(validate(MixedLfsm{1.5, 0.5, {{{1.0, 0.0}, 1.0}}}).ok);
    CHECK_FALSE(validate(Lfsm{1.5, 1.0 / 1.5, 1.0, 0.0}).ok);
    CHECK_FALSE(validate(Lfsm{1.5, 1.0, 1.0, 0.0}).ok);
    CHECK_FALSE(validate(Lfsm{1.5, 0.7, 0.0, 0.0}).ok);
    CHECK_FALSE(validate(LogFractional{1.0, 1.0}).ok);
    CHECK_FALSE(validate(Chentsov{1.5, 1.0}).ok);
    CHECK_FALSE(validate(RotatingAverage{1.5, 1.6, {0.0, {{1, 1.0, 0.0}}}}).ok);
    CHECK_FALSE(validate(RotatingAverage{1.5, 0.8, {2.0, {}}}).ok);
    CHECK_FALSE(validate(LinearMotion{2.5, 1.0, 0.0}).ok);
  }

  TEST_CASE("build rejects inadmissible specs with the violated condition") {
    CHECK_THROWS_AS(build(Lfsm{1.5, 1.0 / 1.5, 1.0, 0.0}), ParameterError);
    CHECK_THROWS_WITH_AS(build(TruncatedFractional{1.5, 0.5, 0.9}), doctest::Contains("alpha*a"), ParameterError);
    CHECK_NOTHROW(build_unvalidated(TruncatedFractional{1.5, 0.5, 0.9}));
  }

  TEST_CASE("self-similarity exponents") {
    CHECK(hurst_of(LinearMotion{1.2, 1.0, 0.0}) == doctest::Approx(1.0 / 1.2));
    CHECK(hurst_of(Lfsm{1.5, 0.7, 1.0, 0.0}) == 0.7);
    CHECK(hurst_of(LogFractional{1.5, 1.0}) == doctest::Approx(1.0 / 1.5));
    CHECK(hurst_of(TruncatedFractional{1.5, 0.5, 0.5}) == doctest::Approx(5.0 / 6.0));
    CHECK(hurst_of(Chentsov{1.25, 0.5}) == doctest::Approx(0.4));
    CHECK(hurst_of(Chentsov{0.5, 0.6}) == doctest::Approx(1.2));
    CHECK(hurst_of(RotatingAverage{1.5, 0.8, {0.0, {{1, 1.0, 0.0}}}}) == doctest::Approx(0.8 / 1.5));
    CHECK_THROWS_AS(hurst_of(Chentsov{1.5, 1.5}), ParameterError);
  }

  TEST_CASE("kernel values") {
    const Kernel lfsm = build(Lfsm{1.5, 0.7, 1.0, 0.0});
    CHECK(lfsm(1.0, Point{0, 1.0, 2.0}) == 0.0);  // s beyond t: both positive parts vanish
    const double d = 0.7 - 1.0 / 1.5;
    CHECK(lfsm(1.0, Point{0, 1.0, -1.0}) == doctest::Approx(std::pow(2.0, d) - 1.0));

    const Kernel lm = build(LinearMotion{1.5, 1.0, 0.0});
    CHECK(lm(2.0, Point{0, 1.0, 1.0}) == 1.0);
    CHECK(lm(2.0, Point{0, 1.0, -1.0}) == 0.0);

    const Kernel ch = build(Chentsov{1.25, 0.5});
    CHECK(ch(2.0, Point{0, 0.5, 1.0}) == 0.0);
    CHECK(ch(2.0, Point{0, 0.5, 1.8}) == 1.0);
    CHECK(ch(2.0, Point{0, 3.0, 0.0}) == 0.0);

    const Kernel tr = build(TruncatedFractional{1.5, 0.5, 0.5});
    CHECK(tr(1.0, Point{0, 10.0, -1.0}) == doctest::Approx(std::sqrt(2.0) - 1.0));
    CHECK(tr(1.0, Point{0, 0.5, -1.0}) == 0.0);  // both arguments capped

    const Kernel lf = build(LogFractional{1.5, 2.0});
    CHECK(lf(1.0, Point{0, 1.0, -1.0}) == doctest::Approx(2.0 * std::log(2.0)));

    const Kernel ra = build(RotatingAverage{1.5, 0.8, {0.0, {{1, 1.0, 0.0}}}});
    CHECK(ra(1.0, Point{0, 2.0, 0.5}) == doctest::Approx(std::cos(2.5) - std::cos(0.5)));
    CHECK(ra(0.0, Point{0, 2.0, 0.5}) == 0.0);
  }

  TEST_CASE("JSON round trip for every family") {
    const std::vector<FamilySpec> specs{
        Lfsm{1.5, 0.7, 1.0, -0.5},
        LinearMotion{1.2, 1.0, 0.0},
        LogFractional{1.5, 1.0},
        MixedLfsm{1.5, 0.6, {{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.25}}},
        TruncatedFractional{1.5, -0.5, -0.2},
        Chentsov{1.25, 0.5},
        RotatingAverage{1.5, 0.8, {0.25, {{1, 1.0, 0.0}, {3, 0.0, -0.5}}}},
    };
    for (const auto& spec : specs) {
      const auto doc = to_json(spec);
      INFO(doc.dump());
      CHECK(doc.at("family") == family_name(spec));
      CHECK(to_json(family_from_json(doc)) == doc);
    }
  }

  TEST_CASE("malformed spec documents") {
    CHECK_THROWS_AS(family_from_json(nlohmann::json{{"family", "nope"}}), ParameterError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json{{"alpha", 1.5}}), ParameterError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json{{"family", "lfsm"}, {"alpha", "x"}}), ParameterError);
  }

  TEST_CASE("property: closed-form truncated region agrees with its branches") {
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j <= 40; ++j) {
        const double a = -1.0 + 0.05 * i, b = -1.0 + 0.05 * j;
        const bool up = truncated_region_upper(1.5, a, b), lo = truncated_region_lower(1.5, a, b);
        CHECK_FALSE((up && lo));
        CHECK(truncated_admissible(1.5, a, b) == (up || lo));
        if (up) CHECK(a > 0.0);
        if (lo) CHECK(a < 0.0);
      }
  }
}
