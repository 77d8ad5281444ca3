#pragma once

#include <functional>
#include <vector>

#include "sssi/kernel.hpp"
#include "sssi/stable_core.hpp"

namespace sssi {

/// One sampled path: values[i] at times[i], times strictly increasing.
struct PathFunction {
  std::vector<double> times;
  std::vector<double> values;
};

struct MasaniForward {
  /// Y on the grid points t >= 0.
  PathFunction y;
  /// e^{-L} max |X|: bound on the contribution of the history before -L.
  double truncation_bound = 0.0;
};

/// Y_t = X_t - int_{-inf}^t e^{-(t-s)} X_s ds with the history cut at -L. The
/// window integral is advanced by the exact exponential factor between grid
/// points and the trapezoid rule inside each step.
MasaniForward masani_forward(const PathFunction& x, double history = 20.0);

/// X_t = Y_t - Y_0 + int_0^t Y_u du, with left-endpoint sums for the integral.
PathFunction masani_inverse(const PathFunction& y);

/// Y(u) = e^{-H u} X(e^u) on u = log t; requires a geometric grid of positive
/// times.
PathFunction lamperti_to_stationary(const PathFunction& x, double hurst);

/// X(t) = t^H Y(log t) on t = e^u; requires an equally spaced grid.
PathFunction lamperti_from_stationary(const PathFunction& y, double hurst);

/// Kernel of t -> X_{t+T} - X_t.
Kernel increment_process(const Kernel& kernel, double lag);

/// Applies a per-path transform to every row. All output rows must share
/// one grid.
PathEnsemble transform_paths(const PathEnsemble& in, const std::function<PathFunction(const PathFunction&)>& fn,
                             unsigned threads = 1);

}  // namespace sssi
