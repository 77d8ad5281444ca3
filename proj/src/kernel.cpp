#include "sssi/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sssi/errors.hpp"

namespace sssi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> with_origin(std::span<const double> times) {
  std::vector<double> out(times.begin(), times.end());
  out.push_back(0.0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> time_range(std::span<const double> times) {
  double lo = 0.0, hi = 0.0;
  for (double t : times) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {lo, hi};
}

/// Positive pairwise distances within times plus the origin, scaled.
std::vector<double> pair_gaps(std::span<const double> times, double scale) {
  auto pts = with_origin(times);
  std::vector<double> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) out.push_back((pts[j] - pts[i]) * scale);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// b1 u_+^d + b2 u_-^d evaluated as the difference f(t - s) - f(-s).
double fractional_difference(double t, double s, double d, double b1, double b2) {
  const double u = t - s;
  const double v = -s;
  if (u > 0.0 && v > 0.0) return b1 == 0.0 ? 0.0 : b1 * power_difference(v, t, d);
  if (u < 0.0 && v < 0.0) return b2 == 0.0 ? 0.0 : b2 * power_difference(-v, -t, d);
  auto f = [&](double w) {
    if (w > 0.0) return b1 * std::pow(w, d);
    if (w < 0.0) return b2 * std::pow(-w, d);
    return 0.0;
  };
  return f(u) - f(v);
}

class LinearMotionModel final : public KernelModel {
 public:
  explicit LinearMotionModel(const LinearMotion& s) : b1_(s.b1), b2_(s.b2) {}
  double value(double t, const Point& p) const override {
    auto f = [&](double w) { return w > 0.0 ? b1_ : (w < 0.0 ? b2_ : 0.0); };
    return f(t - p.s) - f(-p.s);
  }
  Mixing mixing() const override { return NoMixing{}; }
  std::vector<double> shift_breakpoints(std::span<const double> times, const Point&) const override {
    return with_origin(times);
  }
  std::pair<double, double> shift_support(std::span<const double> times, const Point&) const override {
    return time_range(times);
  }

 private:
  double b1_, b2_;
};

class FractionalModel final : public KernelModel {
 public:
  FractionalModel(double alpha, double hurst, std::vector<std::array<double, 2>> coefficients,
                  std::vector<double> weights)
      : d_(hurst - 1.0 / alpha), b_(std::move(coefficients)), weights_(std::move(weights)) {}
  double value(double t, const Point& p) const override {
    const auto& b = b_[p.atom];
    return fractional_difference(t, p.s, d_, b[0], b[1]);
  }
  Mixing mixing() const override {
    if (weights_.empty()) return NoMixing{};
    return AtomicMixing{weights_};
  }
  std::vector<double> shift_breakpoints(std::span<const double> times, const Point&) const override {
    return with_origin(times);
  }
  std::pair<double, double> shift_support(std::span<const double> times, const Point& p) const override {
    auto [lo, hi] = time_range(times);
    const auto& b = b_[p.atom];
    if (b[0] == 0.0 && b[1] == 0.0) return {0.0, 0.0};
    return {b[0] == 0.0 ? lo : -kInf, b[1] == 0.0 ? hi : kInf};
  }

 private:
  double d_;
  std::vector<std::array<double, 2>> b_;
  std::vector<double> weights_;
};

class LogFractionalModel final : public KernelModel {
 public:
  explicit LogFractionalModel(const LogFractional& s) : c_(s.c) {}
  double value(double t, const Point& p) const override {
    const double s = p.s;
    if (std::abs(s) > 2.0 * std::abs(t)) return c_ * std::log1p(-t / s);
    if (s == 0.0 || s == t) return 0.0;
    return c_ * (std::log(std::abs(t - s)) - std::log(std::abs(s)));
  }
  Mixing mixing() const override { return NoMixing{}; }
  std::vector<double> shift_breakpoints(std::span<const double> times, const Point&) const override {
    return with_origin(times);
  }

 private:
  double c_;
};

class TruncatedModel final : public KernelModel {
 public:
  explicit TruncatedModel(const TruncatedFractional& s) : a_(s.a), b_(s.b) {}
  double value(double t, const Point& p) const override {
    const double u = t - p.s;
    const double v = -p.s;
    const double cap = p.x;
    // Both arguments beyond the cap: the kernel is u^a - v^a for a < 0 and
    // identically zero for a > 0.
    if (u > cap && v > cap) return a_ > 0.0 ? 0.0 : power_difference(v, t, a_);
    return truncated(u, cap) - truncated(v, cap);
  }
  Mixing mixing() const override { return PowerLawMixing{-1.0 - b_}; }
  std::vector<double> shift_breakpoints(std::span<const double> times, const Point& p) const override {
    auto pts = with_origin(times);
    std::vector<double> out = pts;
    for (double t : pts) out.push_back(t - p.x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::pair<double, double> shift_support(std::span<const double> times, const Point& p) const override {
    auto [lo, hi] = time_range(times);
    return {a_ > 0.0 ? lo - p.x : -kInf, hi};
  }
  std::vector<double> mixing_breakpoints(std::span<const double> times) const override {
    return pair_gaps(times, 1.0);
  }

 private:
  double truncated(double w, double cap) const {
    if (w <= 0.0) return 0.0;
    return a_ > 0.0 ? std::pow(std::min(w, cap), a_) : std::pow(std::max(w, cap), a_);
  }
  double a_, b_;
};

class ChentsovModel final : public KernelModel {
 public:
  explicit ChentsovModel(const Chentsov& s) : beta_(s.beta) {}
  double value(double t, const Point& p) const override {
    const double in_t = std::abs(t - p.s) < p.x ? 1.0 : 0.0;
    const double in_0 = std::abs(p.s) < p.x ? 1.0 : 0.0;
    return in_t - in_0;
  }
  Mixing mixing() const override { return PowerLawMixing{beta_ - 2.0}; }
  std::vector<double> shift_breakpoints(std::span<const double> times, const Point& p) const override {
    std::vector<double> out;
    for (double t : with_origin(times)) {
      out.push_back(t - p.x);
      out.push_back(t + p.x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::pair<double, double> shift_support(std::span<const double> times, const Point& p) const override {
    auto [lo, hi] = time_range(times);
    return {lo - p.x, hi + p.x};
  }
  std::vector<double> mixing_breakpoints(std::span<const double> times) const override {
    return pair_gaps(times, 0.5);
  }

 private:
  double beta_;
};

class RotatingModel final : public KernelModel {
 public:
  explicit RotatingModel(const RotatingAverage& s) : beta_(s.beta), g_(s.g), kmax_(s.g.max_harmonic()) {}
  double value(double t, const Point& p) const override { return g_(p.s + t * p.x) - g_(p.s); }
  Mixing mixing() const override { return PowerLawMixing{-1.0 - beta_}; }
  ShiftSpace shift_space() const override { return ShiftSpace::circle; }
  std::vector<double> shift_breakpoints(std::span<const double>, const Point&) const override { return {}; }
  std::pair<double, double> shift_support(std::span<const double>, const Point&) const override {
    return {0.0, 2.0 * std::numbers::pi};
  }
  std::vector<double> mixing_breakpoints(std::span<const double> times) const override {
    // The combination changes character where t_j x is of order one radian.
    double span = 0.0;
    for (double t : times) span = std::max(span, std::abs(t));
    if (span == 0.0) return {};
    return {1.0 / (span * kmax_)};
  }
  double mixing_frequency(std::span<const double> times) const override {
    auto gaps = pair_gaps(times, 1.0);
    return gaps.empty() ? 0.0 : gaps.back() * kmax_;
  }
  std::optional<FourierSeries> combo_series(std::span<const double> times, std::span<const double> thetas,
                                            double x) const override {
    double total = 0.0;
    for (double th : thetas) total += th;
    FourierSeries out;
    for (const auto& h : g_.harmonics) {
      double c = -total, s = 0.0;
      for (std::size_t j = 0; j < times.size(); ++j) {
        const double phase = h.k * times[j] * x;
        c += thetas[j] * std::cos(phase);
        s += thetas[j] * std::sin(phase);
      }
      out.harmonics.push_back({h.k, h.cos * c + h.sin * s, h.sin * c - h.cos * s});
    }
    return out;
  }

 private:
  double beta_;
  FourierSeries g_;
  int kmax_;
};

class IncrementModel final : public KernelModel {
 public:
  IncrementModel(std::shared_ptr<const KernelModel> source, double lag) : source_(std::move(source)), lag_(lag) {}
  double value(double t, const Point& p) const override {
    if (lag_ == 0.0) return 0.0;
    return source_->value(t + lag_, p) - source_->value(t, p);
  }
  Mixing mixing() const override { return source_->mixing(); }
  ShiftSpace shift_space() const override { return source_->shift_space(); }
  std::vector<double> shift_breakpoints(std::span<const double> times, const Point& p) const override {
    return source_->shift_breakpoints(expand(times), p);
  }
  std::pair<double, double> shift_support(std::span<const double> times, const Point& p) const override {
    if (lag_ == 0.0) return {0.0, 0.0};
    return source_->shift_support(expand(times), p);
  }
  std::vector<double> mixing_breakpoints(std::span<const double> times) const override {
    return source_->mixing_breakpoints(expand(times));
  }
  double mixing_frequency(std::span<const double> times) const override {
    return source_->mixing_frequency(expand(times));
  }

 private:
  std::vector<double> expand(std::span<const double> times) const {
    std::vector<double> out;
    for (double t : times) {
      out.push_back(t);
      out.push_back(t + lag_);
    }
    return out;
  }
  std::shared_ptr<const KernelModel> source_;
  double lag_;
};

}  // namespace

std::pair<double, double> KernelModel::shift_support(std::span<const double>, const Point&) const {
  return {-kInf, kInf};
}

std::vector<double> KernelModel::mixing_breakpoints(std::span<const double>) const { return {}; }

double KernelModel::mixing_frequency(std::span<const double>) const { return 0.0; }

std::optional<FourierSeries> KernelModel::combo_series(std::span<const double>, std::span<const double>,
                                                       double) const {
  return std::nullopt;
}

Kernel::Kernel(FamilySpec spec, std::shared_ptr<const KernelModel> model, double lag)
    : spec_(std::move(spec)), model_(std::move(model)), alpha_(alpha_of(spec_)), lag_(lag) {}

double positive_power(double x, double d) { return x > 0.0 ? std::pow(x, d) : 0.0; }

double power_difference(double u, double t, double d) {
  if (std::abs(t) < 0.5 * u) return std::pow(u, d) * std::expm1(d * std::log1p(t / u));
  return std::pow(u + t, d) - std::pow(u, d);
}

Kernel build(const FamilySpec& spec) {
  require_admissible(spec);
  return build_unvalidated(spec);
}

Kernel build_unvalidated(const FamilySpec& spec) {
  const double alpha = alpha_of(spec);
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in (0, 2]");
  struct Builder {
    std::shared_ptr<const KernelModel> operator()(const LinearMotion& s) const {
      return std::make_shared<LinearMotionModel>(s);
    }
    std::shared_ptr<const KernelModel> operator()(const Lfsm& s) const {
      return std::make_shared<FractionalModel>(s.alpha, s.hurst, std::vector<std::array<double, 2>>{{s.b1, s.b2}},
                                               std::vector<double>{});
    }
    std::shared_ptr<const KernelModel> operator()(const LogFractional& s) const {
      return std::make_shared<LogFractionalModel>(s);
    }
    std::shared_ptr<const KernelModel> operator()(const MixedLfsm& s) const {
      std::vector<std::array<double, 2>> b;
      std::vector<double> w;
      for (const auto& atom : s.atoms) {
        b.push_back(atom.b);
        w.push_back(atom.weight);
      }
      return std::make_shared<FractionalModel>(s.alpha, s.hurst, std::move(b), std::move(w));
    }
    std::shared_ptr<const KernelModel> operator()(const TruncatedFractional& s) const {
      return std::make_shared<TruncatedModel>(s);
    }
    std::shared_ptr<const KernelModel> operator()(const Chentsov& s) const {
      return std::make_shared<ChentsovModel>(s);
    }
    std::shared_ptr<const KernelModel> operator()(const RotatingAverage& s) const {
      return std::make_shared<RotatingModel>(s);
    }
  };
  return Kernel(spec, std::visit(Builder{}, spec));
}

Kernel make_increment_kernel(const Kernel& source, double lag) {
  if (!(lag >= 0.0) || !std::isfinite(lag)) throw ParameterError("increment lag must be a finite T >= 0");
  Kernel out(source.spec(), std::make_shared<IncrementModel>(source.model_ptr(), lag), lag);
  out.is_increment_ = true;
  return out;
}

}  // namespace sssi
