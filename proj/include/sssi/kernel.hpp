#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "sssi/family.hpp"

namespace sssi {

/// Coordinates of a point of the spectral space S. `atom` indexes atomic
/// mixing measures, `x` is the radial mixing coordinate (p for the truncated
/// family, x for Chentsov and rotating averages) and `s` the shift coordinate.
struct Point {
  std::size_t atom = 0;
  double x = 1.0;
  double s = 0.0;
};

enum class ShiftSpace { real_line, circle };

struct NoMixing {};
/// Finitely many atoms; atom i carries mass weights[i].
struct AtomicMixing {
  std::vector<double> weights;
};
/// Density x^exponent dx on (0, infinity).
struct PowerLawMixing {
  double exponent = -1.0;
};
using Mixing = std::variant<NoMixing, AtomicMixing, PowerLawMixing>;

/// Evaluable spectral kernel f_t together with the geometry the quadrature
/// and discretization need. Models are immutable after construction.
class KernelModel {
 public:
  virtual ~KernelModel() = default;

  /// f_t at the point. Family kernels are normalized so that f_0 = 0.
  virtual double value(double t, const Point& p) const = 0;
  virtual Mixing mixing() const = 0;
  virtual ShiftSpace shift_space() const { return ShiftSpace::real_line; }

  /// Shift coordinates where some f_{t_j}(x, .) fails to be smooth.
  virtual std::vector<double> shift_breakpoints(std::span<const double> times, const Point& p) const = 0;
  /// Closed interval outside of which every f_{t_j}(x, .) vanishes; infinite
  /// ends are reported as +-infinity.
  virtual std::pair<double, double> shift_support(std::span<const double> times, const Point& p) const;
  /// Radial coordinates where the inner shift integral fails to be smooth.
  virtual std::vector<double> mixing_breakpoints(std::span<const double> times) const;
  /// Angular frequency (in the radial coordinate) of oscillations of the
  /// inner integral; 0 when it does not oscillate.
  virtual double mixing_frequency(std::span<const double> times) const;

  /// For kernels on the circle whose combination sum_j theta_j f_{t_j}(x, .)
  /// is a trigonometric polynomial in s, its coefficients. Lets the circle
  /// integral avoid per-node evaluation.
  virtual std::optional<FourierSeries> combo_series(std::span<const double> times, std::span<const double> thetas,
                                                    double x) const;
};

class Kernel {
 public:
  Kernel(FamilySpec spec, std::shared_ptr<const KernelModel> model, double lag = 0.0);

  double alpha() const { return alpha_; }
  const FamilySpec& spec() const { return spec_; }
  const KernelModel& model() const { return *model_; }
  std::shared_ptr<const KernelModel> model_ptr() const { return model_; }
  /// Lag T of an increment (stationary) kernel; 0 for a family kernel.
  double increment_lag() const { return lag_; }
  bool is_increment() const { return is_increment_; }

  double operator()(double t, const Point& p) const { return model_->value(t, p); }

 private:
  friend Kernel make_increment_kernel(const Kernel& source, double lag);
  FamilySpec spec_;
  std::shared_ptr<const KernelModel> model_;
  double alpha_;
  double lag_;
  bool is_increment_ = false;
};

/// Validates and builds the kernel; throws ParameterError naming the
/// violated condition.
Kernel build(const FamilySpec& spec);
/// Builds the kernel without the admissibility check, for probing parameters
/// where the control integral may diverge. Only alpha is checked.
Kernel build_unvalidated(const FamilySpec& spec);

/// Kernel of the stationary process t -> X_{t+T} - X_t.
Kernel make_increment_kernel(const Kernel& source, double lag);

/// |v|^alpha with fast paths for the common stability indices.
inline double abs_pow(double v, double alpha) {
  const double a = std::abs(v);
  if (alpha == 1.5) return a * std::sqrt(a);
  if (alpha == 2.0) return a * a;
  if (alpha == 1.0) return a;
  if (alpha == 0.5) return std::sqrt(a);
  return std::pow(a, alpha);
}

/// x^d guarding the 0^d convention (0 for x <= 0).
double positive_power(double x, double d);
/// (u + t)^d - u^d for u > 0, u + t > 0, accurate when |t| << u.
double power_difference(double u, double t, double d);

}  // namespace sssi
