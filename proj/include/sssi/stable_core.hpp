#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sssi/kernel.hpp"
#include "sssi/quadrature.hpp"

namespace sssi {

/// Finite list of (theta_j, t_j) pairs defining sum_j theta_j X_{t_j}.
struct LinearCombo {
  struct Term {
    double theta = 0.0;
    double t = 0.0;
  };
  std::vector<Term> terms;

  std::vector<double> thetas() const;
  std::vector<double> times() const;
  /// Same thetas at times c * t_j.
  LinearCombo scaled(double c) const;
  /// Probe of sum_j theta_j (X_{t_j + h} - X_h).
  LinearCombo shifted_increments(double h) const;
};

/// The default probe set: eight combinations of one to three time points.
std::vector<LinearCombo> default_probes();

/// Draws with characteristic function exp(-|theta|^alpha), alpha in (0, 2].
/// Deterministic in (alpha, n, seed).
std::vector<double> sample_standard_sas(double alpha, std::size_t n, std::uint64_t seed);

/// Chambers-Mallows-Stuck transform of V ~ U(-pi/2, pi/2), W ~ Exp(1).
double sas_from_uniforms(double alpha, double u_angle, double u_exp);

struct QuadraturePolicy {
  double rtol = 1e-3;
  /// Each step tightens the internal panel tolerances tenfold and doubles the
  /// circle resolution.
  int refinement = 0;
  int circle_nodes = 128;
  double sweep_ratio = 2.0;
  int max_panels = 48;
  int max_segments = 400;

  double panel_rtol() const;
  double stabilization_rtol() const;
  int nodes() const;
};

struct CfExponent {
  double value = 0.0;
  quad::Verdict verdict = quad::Verdict::converged;
  /// Outer truncation trace: (bound, partial value) pairs in sweep order.
  std::vector<quad::SweepStep> trace;
};

/// sigma^alpha = integral of |sum_j theta_j f_{t_j}|^alpha dmu.
CfExponent cf_exponent(const Kernel& kernel, const LinearCombo& combo, const QuadraturePolicy& policy = {});

/// Value of cf_exponent; throws DivergenceError unless it converged.
double cf_exponent_value(const Kernel& kernel, const LinearCombo& combo, const QuadraturePolicy& policy = {});

/// Discretization of the control measure into cells for simulation.
struct GridPolicy {
  /// Shift cells per unit of the finest time spacing.
  int cells_per_step = 4;
  /// Outer shift cells grow geometrically with this ratio out to the reach.
  double growth = 1.05;
  /// Outer shift cells extend to this multiple of the time span.
  double reach = 4096.0;
  double radial_min = 1e-3;
  double radial_max = 1e3;
  int radial_points = 512;
  int circle_cells = 256;
};

struct Cell {
  Point center;
  double mass = 0.0;
};

std::vector<Cell> discretize(const Kernel& kernel, std::span<const double> times, const GridPolicy& grid = {});

/// Exact cf exponent of the discretized integral sum_cells f(center) M(cell).
double discretized_cf_exponent(const Kernel& kernel, std::span<const Cell> cells, const LinearCombo& combo);

struct PathEnsemble {
  std::vector<double> times;
  /// Row-major n_paths x n_times.
  std::vector<double> values;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::string spec_digest;

  double at(std::size_t path, std::size_t time_index) const { return values[path * times.size() + time_index]; }
  std::span<const double> path(std::size_t i) const {
    return std::span<const double>(values).subspan(i * times.size(), times.size());
  }
};

struct SimulationOptions {
  GridPolicy grid;
  unsigned threads = 1;
};

PathEnsemble simulate(const Kernel& kernel, std::span<const double> times, std::size_t n_paths, std::uint64_t seed,
                      const SimulationOptions& options = {});

/// Mean of exp(i sum_j theta_j X_{t_j}) over paths; throws LookupError when a
/// probe time is not on the grid.
std::complex<double> empirical_cf(const PathEnsemble& ensemble, const LinearCombo& combo);

/// Stable digest of a JSON-serializable spec (FNV-1a of the canonical dump).
std::string spec_digest(const FamilySpec& spec);

}  // namespace sssi
