#include "sssi/region.hpp"

#include <cmath>
#include <numbers>

#include "sssi/errors.hpp"
#include "sssi/parallel.hpp"

namespace sssi {

QuadraturePolicy region_policy() {
  QuadraturePolicy policy;
  policy.max_panels = 40;
  return policy;
}

CfExponent integral_I(double alpha, double a, double b, double t, const QuadraturePolicy& policy) {
  if (!(t > 0.0)) throw ParameterError("integral_I requires t > 0");
  Kernel kernel = build_unvalidated(TruncatedFractional{alpha, a, b});
  return cf_exponent(kernel, LinearCombo{{{1.0, t}}}, policy);
}

bool clear_of_region_boundary(double alpha, double a, double b, double margin) {
  const bool inside = truncated_admissible(alpha, a, b);
  if (a == 0.0 && margin > 0.0) return false;
  constexpr int kSamples = 720;
  for (int k = 0; k < kSamples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / kSamples;
    for (double r : {0.5 * margin, margin}) {
      const double pa = a + r * std::cos(phi);
      const double pb = b + r * std::sin(phi);
      if (truncated_admissible(alpha, pa, pb) != inside) return false;
    }
  }
  return true;
}

std::size_t RegionMap::scored() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.scored ? 1 : 0;
  return n;
}

std::size_t RegionMap::agreeing() const {
  std::size_t n = 0;
  for (const auto& p : points) {
    if (!p.scored) continue;
    const quad::Verdict want = p.expected_finite ? quad::Verdict::converged : quad::Verdict::divergent;
    n += p.verdict == want ? 1 : 0;
  }
  return n;
}

double RegionMap::agreement() const {
  const std::size_t n = scored();
  return n == 0 ? 1.0 : static_cast<double>(agreeing()) / static_cast<double>(n);
}

RegionMap region_map(double alpha, std::span<const double> a_grid, std::span<const double> b_grid,
                     const QuadraturePolicy& policy, double margin, unsigned threads) {
  RegionMap out;
  out.alpha = alpha;
  out.margin = margin;
  out.points.resize(a_grid.size() * b_grid.size());
  parallel_for(out.points.size(), threads, [&](std::size_t idx) {
    RegionPoint& p = out.points[idx];
    p.a = a_grid[idx / b_grid.size()];
    p.b = b_grid[idx % b_grid.size()];
    p.expected_finite = truncated_admissible(alpha, p.a, p.b);
    p.scored = clear_of_region_boundary(alpha, p.a, p.b, margin);
    CfExponent r = integral_I(alpha, p.a, p.b, 1.0, policy);
    p.verdict = r.verdict;
    p.value = r.value;
  });
  return out;
}

}  // namespace sssi
