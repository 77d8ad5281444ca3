#include "sssi/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sssi/errors.hpp"
#include "sssi/parallel.hpp"

namespace sssi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double s) {
  double r = std::fmod(s, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r == kTwoPi ? 0.0 : r;
}

double circle_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a - b));
  return std::min(d, kTwoPi - d);
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

}  // namespace

Flow Flow::translation() { return Flow(FlowKind::translation, 0.0); }
Flow Flow::rotation() { return Flow(FlowKind::rotation, 0.0); }
Flow Flow::scaling(double gamma) { return Flow(FlowKind::scaling, gamma); }
Flow Flow::log_translation(double gamma) { return Flow(FlowKind::log_translation, gamma); }

std::string Flow::name() const {
  switch (kind_) {
    case FlowKind::translation: return "translation";
    case FlowKind::rotation: return "rotation";
    case FlowKind::scaling: return "scaling";
    case FlowKind::log_translation: return "log_translation";
  }
  return "unknown";
}

Point Flow::apply(double t, const Point& p) const {
  Point q = p;
  switch (kind_) {
    case FlowKind::translation: q.s = p.s + t; break;
    case FlowKind::rotation: q.s = wrap_angle(p.s + t * p.x); break;
    case FlowKind::scaling: q.x = p.x * std::exp(t); break;
    case FlowKind::log_translation: q.s = p.s * std::exp(t); break;
  }
  return q;
}

double Flow::rn_derivative(double t, const Point&) const {
  switch (kind_) {
    case FlowKind::translation:
    case FlowKind::rotation: return 1.0;
    case FlowKind::scaling:
    case FlowKind::log_translation: return std::exp(t * (gamma_ + 1.0));
  }
  return 1.0;
}

double Flow::speed(const Point& p) const { return kind_ == FlowKind::rotation ? std::abs(p.x) : 1.0; }

double Flow::distance(const Point& p, const Point& q) const {
  switch (kind_) {
    case FlowKind::translation: return std::abs(p.s - q.s);
    case FlowKind::rotation: return circle_distance(p.s, q.s) + std::abs(p.x - q.x);
    case FlowKind::scaling: return circle_distance(p.s, q.s) + relative_gap(p.x, q.x);
    case FlowKind::log_translation: return relative_gap(p.s, q.s);
  }
  return 0.0;
}

bool FlowLawReport::passed(double tol) const {
  return group_residual < tol && identity_residual < tol && chain_residual < tol && min_rho > 0.0;
}

FlowLawReport check_flow_laws(const Flow& flow, std::span<const std::pair<double, double>> t_pairs,
                              std::span<const Point> points) {
  FlowLawReport r;
  r.min_rho = std::numeric_limits<double>::infinity();
  for (const Point& p : points) {
    r.identity_residual = std::max(r.identity_residual, flow.distance(flow.apply(0.0, p), p));
    for (auto [t1, t2] : t_pairs) {
      ++r.checked;
      const Point joint = flow.apply(t1 + t2, p);
      const Point composed = flow.apply(t1, flow.apply(t2, p));
      r.group_residual = std::max(r.group_residual, flow.distance(joint, composed));
      const double rho = flow.rn_derivative(t1 + t2, p);
      const double chained = flow.rn_derivative(t1, p) * flow.rn_derivative(t2, flow.apply(t1, p));
      r.chain_residual = std::max(r.chain_residual, std::abs(rho - chained) / rho);
      r.min_rho = std::min({r.min_rho, rho, flow.rn_derivative(t1, p), flow.rn_derivative(t2, p)});
    }
  }
  return r;
}

Cocycle constant_cocycle() {
  return [](double, const Point&) { return 1; };
}

Cocycle coboundary(std::function<int(const Point&)> b, const Flow& flow) {
  return [b = std::move(b), flow](double t, const Point& p) { return b(flow.apply(t, p)) * b(p); };
}

CocycleReport check_cocycle(const Cocycle& cocycle, const Flow& flow,
                            std::span<const std::pair<double, double>> t_pairs, std::span<const Point> points) {
  CocycleReport r;
  for (const Point& p : points) {
    for (auto [t1, t2] : t_pairs) {
      ++r.checked;
      const int lhs = cocycle(t1 + t2, p);
      const int rhs = cocycle(t2, p) * cocycle(t1, flow.apply(t2, p));
      if (lhs != rhs) r.failures.push_back({t1, t2, p});
    }
  }
  return r;
}

std::string_view to_string(HopfVerdict v) {
  switch (v) {
    case HopfVerdict::dissipative: return "dissipative";
    case HopfVerdict::conservative: return "conservative";
    case HopfVerdict::undecided: return "undecided";
    case HopfVerdict::degenerate: return "degenerate";
  }
  return "undecided";
}

double orbit_integral(const Flow& flow, const std::function<double(const Point&)>& g0, double alpha,
                      const Point& p, double lo, double hi, double rtol) {
  if (!(hi > lo)) return 0.0;
  // Quarter of the orbit's natural period per piece.
  const double step = 0.5 * std::numbers::pi / std::max(flow.speed(p), 1e-12);
  const auto pieces = static_cast<std::size_t>(std::min(std::ceil((hi - lo) / step), 1e6));
  std::vector<double> edges(pieces + 1);
  for (std::size_t i = 0; i <= pieces; ++i) edges[i] = lo + (hi - lo) * static_cast<double>(i) / pieces;
  edges.back() = hi;
  auto f = [&](double t) { return abs_pow(g0(flow.apply(t, p)), alpha) * flow.rn_derivative(t, p); };
  return quad::integrate_segments(f, edges, 0.0, rtol, 400).value;
}

std::vector<HopfPoint> hopf_classify(const Flow& flow, const std::function<double(const Point&)>& g0, double alpha,
                                     std::span<const Point> points, const HopfSchedule& schedule,
                                     unsigned threads) {
  if (schedule.windows < 4) throw ParameterError("hopf schedule needs at least 4 windows");
  std::vector<HopfPoint> out(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    HopfPoint& hp = out[i];
    hp.point = points[i];
    const Point& p = points[i];
    std::vector<double> bounds, contributions;
    double window = schedule.first_window;
    double total = orbit_integral(flow, g0, alpha, p, -window, window, schedule.rtol);
    hp.trace.push_back({window, total});
    for (int k = 1; k < schedule.windows; ++k) {
      const double next = window * schedule.ratio;
      const double c = orbit_integral(flow, g0, alpha, p, -next, -window, schedule.rtol) +
                       orbit_integral(flow, g0, alpha, p, window, next, schedule.rtol);
      total += c;
      bounds.push_back(next);
      contributions.push_back(c);
      hp.trace.push_back({next, total});
      window = next;
    }
    if (total == 0.0) {
      hp.verdict = HopfVerdict::degenerate;
      return;
    }
    quad::SweepPolicy sp;
    sp.stabilization_rtol = schedule.stabilization_rtol;
    sp.reference_scale = hp.trace.front().value;
    sp.full_schedule = true;
    const quad::SweepResult tail = quad::assess_contributions(bounds, contributions, sp);
    if (tail.verdict == quad::Verdict::converged) {
      hp.verdict = HopfVerdict::dissipative;
      return;
    }
    // Least-squares fit of the truncated integral against L.
    double mx = 0.0, my = 0.0;
    for (const auto& s : hp.trace) {
      mx += s.window;
      my += s.value;
    }
    const double n = static_cast<double>(hp.trace.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& s : hp.trace) {
      sxx += (s.window - mx) * (s.window - mx);
      sxy += (s.window - mx) * (s.value - my);
      syy += (s.value - my) * (s.value - my);
    }
    const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
    if (tail.verdict == quad::Verdict::divergent && sxy > 0.0 && r2 > schedule.r2_min)
      hp.verdict = HopfVerdict::conservative;
  });
  return out;
}

}  // namespace sssi
