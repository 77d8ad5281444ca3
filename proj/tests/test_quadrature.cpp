#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sssi/quadrature.hpp"

using namespace sssi;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Kronrod 15 integrates polynomials up to degree 22 exactly") {
    for (int d = 0; d <= 22; ++d) {
      auto f = [d](double x) { return std::pow(x, d); };
      const auto e = quad::gauss_kronrod15(f, 0.0, 1.0);
      CHECK(e.value == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }

  TEST_CASE("adaptive integration of smooth and singular integrands") {
    auto r = quad::integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    r = quad::integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10, 2000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));

    r = quad::integrate_adaptive([](double x) { return x; }, 1.0, 0.0, 1e-14, 1e-14);
    CHECK(r.value == doctest::Approx(-0.5));
  }

  TEST_CASE("segment breakpoints handle kinks") {
    const std::vector<double> pts{-1.0, 0.3, 2.0};
    const auto r = quad::integrate_segments([](double x) { return std::abs(x - 0.3); }, pts, 1e-14, 1e-14);
    CHECK(r.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7).epsilon(1e-13));
  }

  TEST_CASE("Wynn epsilon sums a geometric series from a few partial sums") {
    std::vector<double> partial;
    double s = 0.0;
    for (int k = 0; k < 9; ++k) {
      s += std::pow(0.9, k);
      partial.push_back(s);
    }
    CHECK(quad::wynn_epsilon(partial) == doctest::Approx(10.0).epsilon(1e-10));
  }

  TEST_CASE("geometric sweep converges on a power-law tail") {
    // int_1^inf x^{-2.5} dx = 2/3
    auto piece = [](double lo, double hi) {
      return quad::integrate_adaptive([](double x) { return std::pow(x, -2.5); }, lo, hi, 1e-15, 1e-12).value;
    };
    const auto r = quad::sweep_geometric(piece, 1.0, 2.0, {});
    CHECK(r.verdict == quad::Verdict::converged);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  }

  TEST_CASE("geometric sweep towards zero") {
    // int_0^1 x^{-0.5} dx = 2
    auto piece = [](double lo, double hi) {
      return quad::integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, lo, hi, 1e-15, 1e-12).value;
    };
    const auto r = quad::sweep_geometric(piece, 1.0, 0.5, {});
    CHECK(r.verdict == quad::Verdict::converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("geometric sweep flags divergent tails") {
    for (double power : {-1.0, -0.5, 0.0}) {
      auto piece = [power](double lo, double hi) {
        return quad::integrate_adaptive([power](double x) { return std::pow(x, power); }, lo, hi, 1e-15, 1e-12).value;
      };
      INFO("power = " << power);
      CHECK(quad::sweep_geometric(piece, 1.0, 2.0, {}).verdict == quad::Verdict::divergent);
    }
  }

  TEST_CASE("verdict combination and names") {
    using quad::Verdict;
    CHECK(quad::combine(Verdict::converged, Verdict::converged) == Verdict::converged);
    CHECK(quad::combine(Verdict::undecided, Verdict::converged) == Verdict::undecided);
    CHECK(quad::combine(Verdict::undecided, Verdict::divergent) == Verdict::divergent);
    CHECK(quad::to_string(Verdict::converged) == "finite");
    CHECK(quad::to_string(Verdict::divergent) == "divergent");
  }
}
