#pragma once

#include <span>
#include <vector>

#include "sssi/quadrature.hpp"
#include "sssi/stable_core.hpp"

namespace sssi {

/// Quadrature policy for well-posedness probing: a divergent tail is declared
/// once its panel contributions stop decreasing, so the schedule is shorter
/// than the default.
QuadraturePolicy region_policy();

/// I(a, b) = int_0^inf int_R |(t-s)_+^a ^ p^a - (-s)_+^a ^ p^a|^alpha p^{-1-b} ds dp,
/// with x ^ p^a read as min(x, p)^a for a > 0 and max(x, p)^a for a < 0.
/// Requires t > 0.
CfExponent integral_I(double alpha, double a, double b, double t = 1.0, const QuadraturePolicy& policy = region_policy());

struct RegionPoint {
  double a = 0.0;
  double b = 0.0;
  quad::Verdict verdict = quad::Verdict::undecided;
  double value = 0.0;
  /// Closed-form answer: finite iff max(0, alpha a - alpha + 1) < b < alpha a
  /// or max(alpha a, alpha a - alpha + 1) < b < min(0, alpha a + 1).
  bool expected_finite = false;
  /// False for points within the margin of a region boundary.
  bool scored = false;
};

struct RegionMap {
  double alpha = 0.0;
  double margin = 0.0;
  /// Row-major over (a, b): index i * b_grid.size() + j.
  std::vector<RegionPoint> points;

  std::size_t scored() const;
  std::size_t agreeing() const;
  /// Fraction of scored points whose verdict matches the closed form; 1 when
  /// nothing is scored.
  double agreement() const;
};

/// True when the closed-form region membership is constant on the disc of the
/// given radius around (a, b).
bool clear_of_region_boundary(double alpha, double a, double b, double margin);

RegionMap region_map(double alpha, std::span<const double> a_grid, std::span<const double> b_grid,
                     const QuadraturePolicy& policy = region_policy(), double margin = 0.05, unsigned threads = 1);

}  // namespace sssi
