#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sssi/stable_core.hpp"

namespace sssi {

/// Elements of the value space E are coordinate vectors; addition and
/// scaling are coordinate-wise and the space supplies its F-norm.
using Element = std::vector<double>;

struct ValueSpace {
  std::function<double(std::span<const double>)> fnorm;
};

/// |y| on one coordinate.
ValueSpace scalar_space();
/// ||y|| = E min(|y|, 1), the empirical mean over coordinates (paths).
ValueSpace ensemble_space();

using Curve = std::function<Element(double)>;

/// Each path of the ensemble, linearly interpolated between grid times.
Curve ensemble_curve(const PathEnsemble& ensemble);

/// A left-continuous function with right-hand limits: a finite step function
/// or a smooth function.
class Multiplier {
 public:
  static Multiplier constant(double c);
  /// values[0] on t <= knots[0], values[i] on (knots[i-1], knots[i]], and
  /// values.back() after the last knot.
  static Multiplier step(std::vector<double> knots, std::vector<double> values);
  static Multiplier smooth(std::function<double(double)> fn);

  double operator()(double t) const;
  /// Jump points of a step multiplier.
  const std::vector<double>& knots() const { return knots_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::function<double(double)> fn_;
};

struct ConvergenceCertificate {
  /// Number of partition intervals at each dyadic level.
  std::vector<std::size_t> partition_sizes;
  /// F-norm distance between the sums at successive levels.
  std::vector<double> distances;
  double tol = 0.0;
  bool converged = false;
};

struct RiemannResult {
  /// Empty unless the certificate converged.
  std::optional<Element> value;
  ConvergenceCertificate certificate;
};

/// Riemann sums of phi(t) f(t) over [a, b] on dyadic partitions with midpoint
/// tags. Jumps of a step multiplier are partition points at every level, so
/// no tag straddles a jump. Stops once successive sums are within tol.
RiemannResult integrate(const Curve& f, const Multiplier& phi, double a, double b, double tol,
                        const ValueSpace& space = scalar_space(), int max_depth = 20);

/// t -> int_a^t f(s) ds, built from integrate on the gaps between requested
/// points and memoized. The pieces share tol * (gap / (b - a)) * 0.1 so the
/// accumulated error stays below tol / 10.
Curve antiderivative(const Curve& f, double a, double b, double tol, const ValueSpace& space = scalar_space());

struct FubiniReport {
  double residual = 0.0;
  Element lhs;
  Element rhs;
};

/// F-norm distance between int phi(t) F(t) dt and int (int_t^b phi) f(t) dt
/// with F(t) = int_a^t f. Throws DivergenceError if an integral fails to
/// converge.
FubiniReport check_fubini(const Curve& f, const Multiplier& phi, double a, double b, double tol,
                          const ValueSpace& space = scalar_space());

struct SemivariationEstimate {
  /// Lower bound on A(f, delta).
  double value = 0.0;
  std::size_t partitions_tried = 0;
  std::size_t patterns_tried = 0;
};

/// max over sampled partitions and coefficient patterns |c_j| <= delta of
/// ||sum_j c_j (f(t_j) - f(t_{j-1}))||. Partitions are uniform with 1, 2, 4,
/// ... up to `budget` intervals. Patterns are delta sign(Delta f_j) in each
/// coordinate (at most 32 coordinates) plus `random_patterns` random ones;
/// a one-coordinate space uses only the sign pattern, which is optimal there,
/// and on the finest partition also moves each turning point to the local
/// extremum of f.
SemivariationEstimate semivariation(const Curve& f, double a, double b, double delta, std::size_t budget = 4096,
                                    const ValueSpace& space = scalar_space(), std::size_t random_patterns = 16,
                                    std::uint64_t seed = 3);

}  // namespace sssi
