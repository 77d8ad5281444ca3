#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sssi/stable_core.hpp"

namespace sssi {

struct VerificationReport {
  std::string check;
  std::vector<LinearCombo> probes;
  /// One residual per probe (or per identity for the pointwise checks), at
  /// the most refined level run.
  std::vector<double> residuals;
  double tolerance = 0.0;
  bool passed = false;
  /// Max residual at each quadrature refinement level run.
  std::vector<double> refinement_trace;
  /// Fitted H for the self-similarity check, inferred H for the scaling maps.
  std::optional<double> fitted_hurst;
  std::optional<double> expected_hurst;
  /// Worst quadrature verdict met; anything but converged fails the check.
  quad::Verdict verdict = quad::Verdict::converged;
  std::string message;

  double max_residual() const;
};

/// h-invariance of sigma^alpha(sum_j theta_j (X_{t_j+h} - X_h)): residual is
/// max over h of |sigma(h)/sigma(0) - 1|. With `refine`, the check is rerun one
/// refinement step finer and must not get worse beyond that level's
/// stabilization tolerance.
VerificationReport check_stationary_increments(const Kernel& kernel, std::span<const LinearCombo> probes,
                                               std::span<const double> shifts, double tol = 1e-3,
                                               const QuadraturePolicy& policy = {}, bool refine = true);

/// Least-squares slope of log sigma^alpha(probe at times c t) against log c,
/// per probe; residual is |slope / (alpha H) - 1| against `expected_hurst`,
/// or hurst_of(spec) when it is not given.
VerificationReport check_self_similar(const Kernel& kernel, std::span<const LinearCombo> probes,
                                      std::span<const double> scales, double tol = 0.01,
                                      const QuadraturePolicy& policy = {},
                                      std::optional<double> expected_hurst = std::nullopt);

/// Exponents (beta_1, beta_2) with f_{ct}(rho_c x, c s) = c^beta_1 f_t(x, s) and
/// Q o rho_c = c^beta_2 Q.
struct ScalingExponents {
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// Declared scaling exponents; throws UnsupportedError for families without
/// a declared rho_c.
ScalingExponents declared_scaling(const FamilySpec& spec);

/// Pointwise residuals of the two scaling identities on sampled (x, s, t, c)
/// and mixing cells, and H = (alpha beta_1 + beta_2 + 1) / alpha from the
/// inferred exponents against hurst_of.
VerificationReport check_scaling_maps(const FamilySpec& spec, std::span<const double> scales, double tol = 1e-12,
                                      std::size_t samples = 1000, std::uint64_t seed = 7);

enum class IdentityFixture {
  /// f_t - f_0 = a_t rho_t^{1/alpha} g0 o phi_t - g0 with the rotation flow,
  /// a = 1, rho = 1 and g0(s, x) = g(s).
  rotating_average,
  /// f_t(s) = t^H a_{log t} rho_{log t}^{1/alpha} g0 o phi_{log t}(s) with
  /// phi_u(s) = e^{-u} s, a = 1 and g0 = f_1.
  lamperti,
};

VerificationReport check_kernel_identity(const Kernel& kernel, IdentityFixture fixture, double tol = 1e-10,
                                         std::size_t samples = 1000, std::uint64_t seed = 11);

/// Max over probes of |empirical_cf - exp(-sigma^alpha)|.
VerificationReport mc_distribution_check(const PathEnsemble& ensemble, const Kernel& kernel,
                                         std::span<const LinearCombo> probes, double tol,
                                         const QuadraturePolicy& policy = {});

/// 3 / sqrt(n_paths) plus the given discretization allowance.
double mc_tolerance(std::size_t n_paths, double allowance = 0.0);

}  // namespace sssi
