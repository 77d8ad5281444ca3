#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sssi/kernel.hpp"
#include "sssi/quadrature.hpp"

namespace sssi {

enum class FlowKind {
  /// s -> s + t on R, Lebesgue measure.
  translation,
  /// (s, x) -> (s + t x mod 2 pi, x) on [0, 2 pi) x (0, inf), Lebesgue x Q.
  rotation,
  /// (s, x) -> (s, e^t x) on [0, 2 pi) x (0, inf) with Q(dx) = x^gamma dx.
  scaling,
  /// u -> e^t u on (0, inf) with density u^gamma, stored in the s coordinate.
  log_translation,
};

/// A measurable flow {phi_t} with the Radon-Nikodym derivative
/// rho_t = d(mu o phi_t)/d mu of its invariant-class measure. Points reuse the
/// kernel coordinates: `s` is the shift coordinate and `x` the radial one.
class Flow {
 public:
  static Flow translation();
  static Flow rotation();
  static Flow scaling(double gamma);
  static Flow log_translation(double gamma = 0.0);

  FlowKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  std::string name() const;

  Point apply(double t, const Point& p) const;
  double rn_derivative(double t, const Point& p) const;
  /// Rate at which orbits move through the state; sets orbit quadrature steps.
  double speed(const Point& p) const;
  /// Distance between two states, modulo 2 pi in the circle coordinate.
  double distance(const Point& p, const Point& q) const;

 private:
  Flow(FlowKind kind, double gamma) : kind_(kind), gamma_(gamma) {}
  FlowKind kind_;
  double gamma_;
};

struct FlowLawReport {
  std::size_t checked = 0;
  /// max |phi_{t1+t2}(s) - phi_{t1}(phi_{t2}(s))|
  double group_residual = 0.0;
  /// max |phi_0(s) - s|
  double identity_residual = 0.0;
  /// max relative deviation of rho_{t+u}(s) from rho_t(s) rho_u(phi_t(s))
  double chain_residual = 0.0;
  /// min rho over the test set; must be positive
  double min_rho = 0.0;

  bool passed(double tol) const;
};

FlowLawReport check_flow_laws(const Flow& flow, std::span<const std::pair<double, double>> t_pairs,
                              std::span<const Point> points);

/// A {-1, +1}-valued cocycle a_t(s).
using Cocycle = std::function<int(double t, const Point& p)>;

Cocycle constant_cocycle();
/// a_t(s) = b(phi_t(s)) b(s) for a sign function b.
Cocycle coboundary(std::function<int(const Point&)> b, const Flow& flow);

struct CocycleFailure {
  double t1 = 0.0;
  double t2 = 0.0;
  Point point;
};

struct CocycleReport {
  std::size_t checked = 0;
  std::vector<CocycleFailure> failures;
  bool passed() const { return failures.empty(); }
};

/// Checks a_{t1+t2}(s) = a_{t2}(s) a_{t1}(phi_{t2}(s)) on every (pair, point).
CocycleReport check_cocycle(const Cocycle& cocycle, const Flow& flow,
                            std::span<const std::pair<double, double>> t_pairs, std::span<const Point> points);

enum class HopfVerdict { dissipative, conservative, undecided, degenerate };
std::string_view to_string(HopfVerdict v);

struct HopfSchedule {
  /// Orbit windows [-L, L] with L = first_window * ratio^k, k < windows.
  double first_window = 1.0;
  double ratio = 2.0;
  int windows = 14;
  /// Linear-growth fit quality required for a conservative verdict.
  double r2_min = 0.99;
  /// Quadrature tolerance of each orbit piece.
  double rtol = 1e-6;
  /// Relative stability of the accelerated orbit integral that counts as
  /// converged.
  double stabilization_rtol = 1e-3;
};

struct HopfTraceStep {
  double window = 0.0;
  double value = 0.0;
};

struct HopfPoint {
  Point point;
  HopfVerdict verdict = HopfVerdict::undecided;
  std::vector<HopfTraceStep> trace;
};

/// Orbit integral of |g0(phi_t(s))|^alpha rho_t(s) over t in [-L, L].
double orbit_integral(const Flow& flow, const std::function<double(const Point&)>& g0, double alpha,
                      const Point& p, double lo, double hi, double rtol);

/// Per point: dissipative when the truncated orbit integrals converge,
/// conservative when they grow linearly in L (fit R^2 above r2_min),
/// degenerate when g0 vanishes along the whole truncated orbit.
std::vector<HopfPoint> hopf_classify(const Flow& flow, const std::function<double(const Point&)>& g0, double alpha,
                                     std::span<const Point> points, const HopfSchedule& schedule = {},
                                     unsigned threads = 1);

}  // namespace sssi
