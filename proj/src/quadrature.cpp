#include "sssi/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace sssi::quad {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converged:
      return "finite";
    case Verdict::divergent:
      return "divergent";
    case Verdict::undecided:
      return "undecided";
  }
  return "undecided";
}

double wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n < 3) return n == 0 ? 0.0 : s.back();
  // prev2 = column k-2, prev = column k-1; column -1 is all zeros.
  std::vector<double> prev2(n + 1, 0.0);
  std::vector<double> prev(s.begin(), s.end());
  double best = s.back();
  const double scale = std::max(std::abs(s.back()), std::abs(s.front()));
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      const double diff = prev[i + 1] - prev[i];
      // Differences at rounding level mean the sequence has already settled;
      // dividing by them would only amplify noise.
      if (k % 2 == 1 && std::abs(diff) <= 1e-14 * scale) return best;
      if (diff == 0.0) return best;
      next[i] = prev2[i + 1] + 1.0 / diff;
    }
    if (k % 2 == 0) {
      if (!std::isfinite(next.back())) return best;
      best = next.back();
    }
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  return best;
}

SweepResult assess_contributions(std::span<const double> bounds, std::span<const double> contributions,
                                 const SweepPolicy& policy) {
  constexpr std::size_t kWindow = 9;
  SweepResult out;
  const std::size_t n = contributions.size();
  std::vector<double> partial(n);
  double running = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    running += contributions[k];
    partial[k] = running;
    std::size_t first = k + 1 > kWindow ? k + 1 - kWindow : 0;
    // Accelerate only an odd-length window so the last even column uses it all.
    if ((k + 1 - first) % 2 == 0) ++first;
    double est = wynn_epsilon(std::span<const double>(partial).subspan(first, k + 1 - first));
    out.steps.push_back({bounds[k], partial[k], est});
  }
  if (n == 0) {
    out.verdict = Verdict::converged;
    return out;
  }
  out.value = out.steps.back().estimate;
  if (n < 3) {
    out.verdict = Verdict::undecided;
    return out;
  }
  const double c0 = contributions[n - 3], c1 = contributions[n - 2], c2 = contributions[n - 1];
  if (c0 == 0.0 && c1 == 0.0 && c2 == 0.0) {
    out.value = partial.back();
    out.verdict = Verdict::converged;
    return out;
  }
  auto ratio = [](double prev, double cur) {
    if (cur == 0.0) return 0.0;
    if (prev == 0.0) return std::numeric_limits<double>::infinity();
    return cur / prev;
  };
  const double r1 = ratio(c0, c1), r2 = ratio(c1, c2);
  const double rprev = n >= 4 ? ratio(contributions[n - 4], c0) : r1;
  const bool decaying = rprev <= policy.decay_ratio_max && r1 <= policy.decay_ratio_max &&
                        r2 <= policy.decay_ratio_max;
  const double scale = std::abs(out.value) + policy.reference_scale;
  const double tol = policy.stabilization_rtol * scale;
  bool stable = false;
  if (n >= 4) {
    const double e2 = out.steps[n - 1].estimate, e1 = out.steps[n - 2].estimate, e0 = out.steps[n - 3].estimate;
    stable = std::abs(e2 - e1) <= tol && std::abs(e1 - e0) <= tol;
  }
  // A tail whose remaining geometric bound is already below tolerance needs
  // no acceleration.
  if (decaying && r2 < 1.0 && c2 * r2 / (1.0 - r2) <= tol) {
    stable = true;
    out.value = out.steps.back().estimate;
  }
  if (decaying && stable) {
    out.verdict = Verdict::converged;
    return out;
  }
  if (!policy.full_schedule) {
    out.verdict = Verdict::undecided;
    return out;
  }
  // Final assessment once the schedule is exhausted.
  constexpr double kFlat = 1.0 - 1e-9;
  const bool non_decreasing = rprev >= kFlat && r1 >= kFlat && r2 >= kFlat;
  const bool grew = n >= 4 && partial[n - 4] > 0.0 && partial[n - 1] > 1.5 * partial[n - 4];
  if (non_decreasing || (grew && !decaying)) {
    out.verdict = Verdict::divergent;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.verdict = Verdict::undecided;
  return out;
}

}  // namespace sssi::quad
