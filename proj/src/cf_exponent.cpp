#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "sssi/errors.hpp"
#include "sssi/stable_core.hpp"

namespace sssi {

namespace {

using quad::Verdict;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Pieces per oscillatory outer panel beyond which the sweep gives up.
constexpr double kMaxOscillatoryPieces = 1 << 15;

struct Partial {
  double value = 0.0;
  Verdict verdict = Verdict::converged;
  std::vector<quad::SweepStep> trace;
};

class Engine {
 public:
  Engine(const Kernel& kernel, const LinearCombo& combo, const QuadraturePolicy& policy)
      : model_(kernel.model()), alpha_(kernel.alpha()), policy_(policy) {
    for (const auto& term : combo.terms) {
      if (term.theta == 0.0) continue;
      times_.push_back(term.t);
      thetas_.push_back(term.theta);
    }
  }

  bool trivial() const { return times_.empty(); }

  Partial run() {
    Partial out;
    std::visit([&](const auto& m) { out = outer(m); }, model_.mixing());
    return out;
  }

 private:
  double combo(const Point& p) const {
    double v = 0.0;
    for (std::size_t j = 0; j < times_.size(); ++j) v += thetas_[j] * model_.value(times_[j], p);
    return abs_pow(v, alpha_);
  }

  quad::SweepPolicy sweep_policy(double reference) const {
    quad::SweepPolicy sp;
    sp.max_panels = policy_.max_panels;
    sp.stabilization_rtol = policy_.stabilization_rtol();
    sp.reference_scale = reference;
    return sp;
  }

  // Inner integral over the shift coordinate for fixed mixing coordinates.
  Partial inner(std::size_t atom, double x) const {
    Point base{atom, x, 0.0};
    if (model_.shift_space() == ShiftSpace::circle) return {circle(base), Verdict::converged, {}};
    return line(base);
  }

  double circle(const Point& base) const {
    const int n = policy_.nodes();
    const double h = 2.0 * std::numbers::pi / n;
    std::vector<double> vals(static_cast<std::size_t>(n));
    if (auto series = model_.combo_series(times_, thetas_, base.x)) {
      if (unit_cos_.size() != static_cast<std::size_t>(n)) {
        unit_cos_.resize(static_cast<std::size_t>(n));
        unit_sin_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          unit_cos_[static_cast<std::size_t>(i)] = std::cos(h * i);
          unit_sin_[static_cast<std::size_t>(i)] = std::sin(h * i);
        }
      }
      std::fill(vals.begin(), vals.end(), series->constant);
      for (const auto& hm : series->harmonics) {
        // cos(k s_i) = cos(2 pi (k i mod n) / n), read from the unit table.
        const auto k = static_cast<std::size_t>(hm.k % n);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
          vals[i] += hm.cos * unit_cos_[idx] + hm.sin * unit_sin_[idx];
          idx += k;
          if (idx >= vals.size()) idx -= vals.size();
        }
      }
      for (double& v : vals) v = abs_pow(v, alpha_);
    } else {
      for (int i = 0; i < n; ++i) {
        Point p = base;
        p.s = h * i;
        vals[static_cast<std::size_t>(i)] = combo(p);
      }
    }
    return h * pairwise_sum(vals);
  }

  Partial line(const Point& base) const {
    auto f = [&](double s) {
      Point p = base;
      p.s = s;
      return combo(p);
    };
    auto [lo, hi] = model_.shift_support(times_, base);
    if (!(hi > lo)) return {};
    std::vector<double> pts;
    for (double b : model_.shift_breakpoints(times_, base))
      if (b >= lo && b <= hi) pts.push_back(b);
    if (std::isfinite(lo)) pts.push_back(lo);
    if (std::isfinite(hi)) pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) pts.push_back(0.0);
    const double span = std::max(1.0, pts.back() - pts.front());
    const double core_lo = pts.front(), core_hi = pts.back();
    // The first tail panels are folded into the core.
    if (!std::isfinite(lo)) pts.insert(pts.begin(), pts.front() - span);
    if (!std::isfinite(hi)) pts.push_back(pts.back() + span);
    const double rtol = 0.1 * policy_.panel_rtol();
    auto core = quad::integrate_segments(f, pts, 1e-300, rtol, policy_.max_segments);
    Partial out{core.value, Verdict::converged, {}};
    auto tail = [&](double sign, double edge) {
      auto piece = [&](double d_lo, double d_hi) {
        double a = edge + sign * d_lo, b = edge + sign * d_hi;
        if (a > b) std::swap(a, b);
        return quad::integrate_adaptive(f, a, b, 1e-12 * rtol * core.value, rtol, policy_.max_segments).value;
      };
      auto r = quad::sweep_geometric(piece, span, policy_.sweep_ratio, sweep_policy(core.value));
      out.verdict = quad::combine(out.verdict, r.verdict);
      out.value += r.value;
      out.trace.insert(out.trace.end(), r.steps.begin(), r.steps.end());
    };
    if (!std::isfinite(lo)) tail(-1.0, core_lo);
    if (!std::isfinite(hi)) tail(1.0, core_hi);
    return out;
  }

  Partial outer(const NoMixing&) { return inner(0, 1.0); }

  Partial outer(const AtomicMixing& m) {
    Partial out;
    std::vector<double> parts;
    for (std::size_t i = 0; i < m.weights.size(); ++i) {
      Partial p = inner(i, 1.0);
      out.verdict = quad::combine(out.verdict, p.verdict);
      parts.push_back(m.weights[i] * p.value);
      out.trace.insert(out.trace.end(), p.trace.begin(), p.trace.end());
    }
    out.value = pairwise_sum(parts);
    return out;
  }

  Partial outer(const PowerLawMixing& m) {
    const double gamma = m.exponent;
    Verdict inner_verdict = Verdict::converged;
    auto radial = [&](double x) {
      Partial p = inner(0, x);
      inner_verdict = quad::combine(inner_verdict, p.verdict);
      if (p.verdict == Verdict::divergent) return kNaN;
      return p.value * std::pow(x, gamma);
    };
    // The oscillatory tail integrates several weights over the same panel;
    // the uniform piece edges make their nodes largely coincide.
    std::unordered_map<double, double> memo;
    double memo_panel = kNaN;
    auto radial_memo = [&](double x) {
      auto [it, fresh] = memo.try_emplace(x, 0.0);
      if (fresh) it->second = radial(x);
      return it->second;
    };
    auto in_log = [&](double u) {
      const double x = std::exp(u);
      return radial(x) * x;
    };
    std::vector<double> bps;
    for (double b : model_.mixing_breakpoints(times_))
      if (b > 0.0 && std::isfinite(b)) bps.push_back(b);
    if (bps.empty()) bps.push_back(1.0);
    std::sort(bps.begin(), bps.end());
    const double omega = model_.mixing_frequency(times_);
    const double rtol = policy_.panel_rtol();
    bool exhausted = false;

    auto weighted_piece = [&](double lo, double hi, double abs_tol, auto&& weight, bool cached = false) {
      const double pieces = omega > 0.0 ? std::ceil((hi - lo) * omega / std::numbers::pi) : 1.0;
      if (pieces > kMaxOscillatoryPieces) {
        exhausted = true;
        return kNaN;
      }
      if (pieces <= 1.0) {
        auto f = [&](double u) {
          const double x = std::exp(u);
          return in_log(u) * weight(x);
        };
        return quad::integrate_adaptive(f, std::log(lo), std::log(hi), abs_tol, rtol, policy_.max_segments).value;
      }
      std::vector<double> edges;
      const auto m_pieces = static_cast<int>(pieces);
      for (int i = 0; i <= m_pieces; ++i) edges.push_back(lo + (hi - lo) * i / m_pieces);
      edges.back() = hi;
      if (cached && lo != memo_panel) {
        memo.clear();
        memo_panel = lo;
      }
      auto f = [&](double x) { return (cached ? radial_memo(x) : radial(x)) * weight(x); };
      return quad::integrate_segments(f, edges, abs_tol, rtol, policy_.max_segments).value;
    };
    auto piece = [&](double lo, double hi, double abs_tol) {
      return weighted_piece(lo, hi, abs_tol, [](double) { return 1.0; });
    };

    Partial out;
    std::vector<double> core_parts;
    // Core between the outermost breakpoints, split at interior ones, with
    // the first panel on each side folded in.
    std::vector<double> edges;
    edges.push_back(bps.front() / policy_.sweep_ratio);
    edges.insert(edges.end(), bps.begin(), bps.end());
    edges.push_back(bps.back() * policy_.sweep_ratio);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (!(edges[i + 1] > edges[i])) continue;
      core_parts.push_back(piece(edges[i], edges[i + 1], 1e-300));
    }
    double core = pairwise_sum(core_parts);
    if (!std::isfinite(core)) {
      out.verdict = exhausted ? Verdict::undecided : Verdict::divergent;
      out.value = kNaN;
      return out;
    }
    const double tail_abs = 1e-12 * rtol * core;
    auto sweep = [&](double start, double ratio) {
      auto r = quad::sweep_geometric([&](double lo, double hi) { return piece(lo, hi, tail_abs); }, start, ratio,
                                     sweep_policy(core));
      if (r.verdict == Verdict::divergent && exhausted) r.verdict = Verdict::undecided;
      out.verdict = quad::combine(out.verdict, r.verdict);
      out.trace.insert(out.trace.end(), r.steps.begin(), r.steps.end());
      return r.value;
    };
    const double down = sweep(edges.front(), 1.0 / policy_.sweep_ratio);
    double up = 0.0;
    if (omega > 0.0) {
      auto r = oscillatory_tail(edges.back(), gamma, core, [&](double lo, double hi, auto&& weight) {
        return weighted_piece(lo, hi, 0.1 * rtol * core * (hi - lo) / hi, weight, true);
      });
      if (exhausted) r.verdict = quad::combine(r.verdict, Verdict::undecided);
      out.verdict = quad::combine(out.verdict, r.verdict);
      out.trace.insert(out.trace.end(), r.steps.begin(), r.steps.end());
      up = r.value;
    } else {
      up = sweep(edges.back(), policy_.sweep_ratio);
    }
    out.verdict = quad::combine(out.verdict, inner_verdict);
    out.value = out.verdict == Verdict::divergent ? kNaN : core + down + up;
    return out;
  }

  // Tail of the radial integral for oscillating inner integrals F(x). The
  // remainder beyond a cut y is modelled as mean(F) * integral of x^gamma over
  // (y, inf); the model error oscillates with y, so the estimate is averaged
  // over cuts y spread across the last panel under a smooth taper.
  template <class Piece>
  quad::SweepResult oscillatory_tail(double start, double gamma, double core, Piece&& piece) {
    quad::SweepResult out;
    if (!(gamma + 1.0 < 0.0)) {
      out.verdict = Verdict::divergent;
      out.value = kNaN;
      return out;
    }
    const double decay = -(gamma + 1.0);
    const double tol = policy_.stabilization_rtol() * core;
    double partial = 0.0;
    double lo = start;
    for (int k = 0; k < policy_.max_panels; ++k) {
      const double hi = lo * policy_.sweep_ratio;
      // Fraction of taper weight on cuts beyond x: the cut-averaged partial
      // integral is the panel integral weighted by it.
      auto beyond = [lo, hi](double x) {
        const double v = (x - lo) / (hi - lo);
        return 1.0 - (v - std::sin(2.0 * std::numbers::pi * v) / (2.0 * std::numbers::pi));
      };
      const double weighted = piece(lo, hi, beyond);
      const double c = piece(lo, hi, [](double) { return 1.0; });
      if (!std::isfinite(c) || !std::isfinite(weighted)) {
        out.verdict = Verdict::undecided;
        out.value = kNaN;
        return out;
      }
      auto cut_tail = [&](double y) {
        const double v = (y - lo) / (hi - lo);
        return 2.0 * std::sin(std::numbers::pi * v) * std::sin(std::numbers::pi * v) * std::pow(y, -decay) / decay;
      };
      const double mean_tail = quad::integrate_adaptive(cut_tail, lo, hi, 0.0, 1e-12).value / (hi - lo);
      // Taper-weighted mean of F over the panel.
      auto taper = [&](double x) {
        const double v = (x - lo) / (hi - lo);
        return std::sin(std::numbers::pi * v) * std::sin(std::numbers::pi * v) * std::pow(x, -gamma);
      };
      const double mean = piece(lo, hi, taper) / (0.5 * (hi - lo));
      const double estimate = partial + weighted + mean * mean_tail;
      partial += c;
      out.steps.push_back({hi, partial, estimate});
      const std::size_t n = out.steps.size();
      if (n >= 3 && std::abs(out.steps[n - 1].estimate - out.steps[n - 2].estimate) <= tol &&
          std::abs(out.steps[n - 2].estimate - out.steps[n - 3].estimate) <= tol) {
        out.verdict = Verdict::converged;
        out.value = estimate;
        return out;
      }
      lo = hi;
    }
    out.verdict = Verdict::undecided;
    out.value = out.steps.empty() ? 0.0 : out.steps.back().estimate;
    return out;
  }

  const KernelModel& model_;
  double alpha_;
  QuadraturePolicy policy_;
  std::vector<double> times_;
  std::vector<double> thetas_;
  mutable std::vector<double> unit_cos_, unit_sin_;
};

}  // namespace

double QuadraturePolicy::panel_rtol() const { return rtol * 1e-3 * std::pow(10.0, -refinement); }

double QuadraturePolicy::stabilization_rtol() const { return rtol * 1e-2 * std::pow(10.0, -refinement); }

int QuadraturePolicy::nodes() const { return circle_nodes << std::max(0, refinement); }

CfExponent cf_exponent(const Kernel& kernel, const LinearCombo& combo, const QuadraturePolicy& policy) {
  Engine engine(kernel, combo, policy);
  if (engine.trivial()) return {};
  Partial p = engine.run();
  CfExponent out;
  out.verdict = p.verdict;
  out.value = p.verdict == quad::Verdict::divergent ? kNaN : std::max(0.0, p.value);
  out.trace = std::move(p.trace);
  return out;
}

double cf_exponent_value(const Kernel& kernel, const LinearCombo& combo, const QuadraturePolicy& policy) {
  CfExponent r = cf_exponent(kernel, combo, policy);
  if (r.verdict != quad::Verdict::converged)
    throw DivergenceError(std::string("cf exponent is ") + std::string(quad::to_string(r.verdict)) +
                          " under the truncation schedule");
  return r.value;
}

}  // namespace sssi
