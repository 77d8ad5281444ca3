#pragma once

// Fixed-order numerical integration shared by the cf-exponent oracle, the
// truncated-family integral, and the orbit integrals of the flow classifier.
//
// Finite pieces use globally adaptive Gauss-Kronrod (7/15). Improper pieces
// are swept with geometrically growing panels (nested truncations) and the
// partial sums are accelerated with Wynn's epsilon algorithm. Every routine
// is deterministic: subdivision and summation order depend only on inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "sssi/parallel.hpp"

namespace sssi::quad {

enum class Verdict { converged, divergent, undecided };

std::string_view to_string(Verdict v);

/// Combines verdicts of pieces of one integral: any divergence wins, then any
/// undecided piece.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::divergent || b == Verdict::divergent) return Verdict::divergent;
  if (a == Verdict::undecided || b == Verdict::undecided) return Verdict::undecided;
  return Verdict::converged;
}

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

/// One 15-point Gauss-Kronrod panel with the QUADPACK error heuristic.
template <class F>
Estimate gauss_kronrod15(F&& f, double a, double b) {
  using namespace detail;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  std::array<double, 7> lo{}, hi{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    lo[j] = f(center - dx);
    hi[j] = f(center + dx);
    kronrod += kKronrodWeights[j] * (lo[j] + hi[j]);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (lo[j] + hi[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return {kronrod * half, err};
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int segments = 0;
  bool converged = false;
};

/// Globally adaptive bisection over the segments between consecutive points:
/// the panel with the largest error estimate is split until the total error
/// is below max(abs_tol, rel_tol * |value|). `max_segments` bounds the number
/// of splits on top of the initial segments.
template <class F>
AdaptiveResult integrate_segments(F&& f, std::span<const double> points, double abs_tol, double rel_tol,
                                  int max_segments = 400) {
  struct Panel {
    double a, b, value, error;
  };
  std::vector<Panel> heap;
  auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    Estimate e = gauss_kronrod15(f, points[i], points[i + 1]);
    heap.push_back({points[i], points[i + 1], e.value, e.error});
    total += e.value;
    total_err += e.error;
  }
  if (heap.empty()) return {0.0, 0.0, 0, true};
  std::make_heap(heap.begin(), heap.end(), by_error);
  const std::size_t limit = heap.size() + static_cast<std::size_t>(std::max(0, max_segments - 1));
  bool ok = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  while (!ok && heap.size() < limit) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      heap.push_back(worst);  // cannot split further in floating point
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    Estimate left = gauss_kronrod15(f, worst.a, mid);
    Estimate right = gauss_kronrod15(f, mid, worst.b);
    heap.push_back({worst.a, mid, left.value, left.error});
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back({mid, worst.b, right.value, right.error});
    std::push_heap(heap.begin(), heap.end(), by_error);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    ok = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  }
  // Re-sum in positional order so the result does not carry heap history.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> values, errors;
  values.reserve(heap.size());
  errors.reserve(heap.size());
  for (const auto& p : heap) {
    values.push_back(p.value);
    errors.push_back(p.error);
  }
  AdaptiveResult out;
  out.value = pairwise_sum(values);
  out.error = pairwise_sum(errors);
  out.segments = static_cast<int>(heap.size());
  out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
  return out;
}

template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                                  int max_segments = 400) {
  if (a == b) return {0.0, 0.0, 0, true};
  const std::array<double, 2> points{std::min(a, b), std::max(a, b)};
  AdaptiveResult r = integrate_segments(f, points, abs_tol, rel_tol, max_segments);
  if (b < a) r.value = -r.value;
  return r;
}

/// Wynn's epsilon algorithm over a window of partial sums. Exact for sums of
/// finitely many geometric sequences, which is what power-law tails produce
/// on geometric panels.
double wynn_epsilon(std::span<const double> partial_sums);

struct SweepPolicy {
  int min_panels = 6;
  int max_panels = 48;
  /// Relative change of the accelerated estimate that counts as stable.
  double stabilization_rtol = 1e-6;
  /// Magnitude of the rest of the integral; tolerances are relative to
  /// |tail| + reference_scale.
  double reference_scale = 0.0;
  /// Ratio of consecutive contributions above which the tail is not treated
  /// as decaying.
  double decay_ratio_max = 0.98;
  /// Evaluate every panel even once stable; used where the verdict matters
  /// more than the cost.
  bool full_schedule = false;
  /// Panels after which contributions that have not decreased over the last
  /// four enlargements end the sweep as divergent.
  int divergence_panels = 16;
};

struct SweepStep {
  double bound = 0.0;      // truncation reached after this panel
  double partial = 0.0;    // integral over the truncated region
  double estimate = 0.0;   // accelerated estimate of the full tail
};

struct SweepResult {
  double value = 0.0;
  Verdict verdict = Verdict::undecided;
  std::vector<SweepStep> steps;
};

/// Classifies a sequence of nonnegative panel contributions, returning the
/// verdict and accelerated value. Exposed separately for testing.
SweepResult assess_contributions(std::span<const double> bounds, std::span<const double> contributions,
                                 const SweepPolicy& policy);

/// Integrates a nonnegative integrand over a ray by nested truncations.
/// Panels are [d0 r^k, d0 r^(k+1)] in distance coordinates when r > 1
/// (sweeping to infinity) or [d0 r^(k+1), d0 r^k] when r < 1 (sweeping to
/// zero). `piece(lo, hi)` returns the integral over one panel, or NaN if the
/// panel itself diverged.
template <class Piece>
SweepResult sweep_geometric(Piece&& piece, double d0, double ratio, const SweepPolicy& policy) {
  std::vector<double> bounds, contributions;
  SweepResult result;
  double inner = d0;
  for (int k = 0; k < policy.max_panels; ++k) {
    double outer = inner * ratio;
    double lo = std::min(inner, outer);
    double hi = std::max(inner, outer);
    double c = piece(lo, hi);
    if (!std::isfinite(c)) {
      result.verdict = Verdict::divergent;
      result.value = std::numeric_limits<double>::quiet_NaN();
      return result;
    }
    bounds.push_back(outer);
    contributions.push_back(c);
    inner = outer;
    if (!policy.full_schedule && k + 1 >= policy.min_panels) {
      SweepResult trial = assess_contributions(bounds, contributions, policy);
      if (trial.verdict == Verdict::converged) return trial;
    }
    if (k + 1 >= policy.divergence_panels && k >= 4) {
      bool growing = true;
      for (std::size_t j = contributions.size() - 4; j < contributions.size(); ++j)
        growing = growing && contributions[j] > 0.0 && contributions[j] >= contributions[j - 1] * (1.0 - 1e-9);
      if (growing) break;
    }
  }
  SweepPolicy final_policy = policy;
  final_policy.full_schedule = true;
  return assess_contributions(bounds, contributions, final_policy);
}

}  // namespace sssi::quad
