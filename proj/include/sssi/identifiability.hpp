#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "sssi/family.hpp"
#include "sssi/transforms.hpp"

namespace sssi {

struct SphereAtom {
  /// Unit vector in the alpha-norm.
  std::array<double, 2> direction{1.0, 0.0};
  double weight = 0.0;
};

/// Finite atomic measure on B_alpha = {b : |b|_alpha = 1}.
struct SphereMeasure {
  double alpha = 1.5;
  std::vector<SphereAtom> atoms;
  bool symmetrized = false;
};

/// (|b1|^alpha + |b2|^alpha)^{1/alpha}
double alpha_norm(const std::array<double, 2>& b, double alpha);

/// Atom (b, w) goes to direction b/|b|_alpha with weight w |b|_alpha^alpha.
/// With `symmetrize`, each atom at o is mirrored at -o with equal weight.
/// Atoms landing on the same direction are merged. Throws ParameterError
/// for a zero atom.
SphereMeasure mixing_measure(std::span<const MixingAtom> atoms, double alpha, bool symmetrize = true);

/// Atom-by-atom equality: directions within `tol` in angle, weights within
/// relative `tol`.
bool same_sphere_measure(const SphereMeasure& m1, const SphereMeasure& m2, double tol = 1e-9);

/// True iff the two mixed LFSMs share alpha and H and their symmetrized
/// sphere measures agree.
bool same_mixed_lfsm(const MixedLfsm& q1, const MixedLfsm& q2, double tol = 1e-9);

/// True iff every atom lies on one line through the origin.
bool ray_test(std::span<const MixingAtom> atoms);

/// 2 pi / gcd of the active harmonic indices. Throws ParameterError when g
/// has no nonconstant harmonic.
double minimal_period(const FourierSeries& g);
bool is_periodically_minimal(const FourierSeries& g);

struct EquivalenceWitness {
  int epsilon = 1;
  /// tau for rotating averages, u for sampled functions.
  double shift = 0.0;
  /// Additive constant; zero for sampled functions.
  double constant = 0.0;
  /// Residual of the witnessed identity on the check grid.
  double residual = 0.0;
};

/// Looks for g2(s) = epsilon g1(s + tau) + c. No match when beta1 != beta2.
/// tau comes from the phase of the lowest active harmonic of g1 and is then
/// checked against the whole series on a grid over [0, 2 pi). Among valid
/// witnesses the one with tau closest to 0 is returned, epsilon = 1 first.
/// Throws ParameterError unless both series are periodically minimal.
std::optional<EquivalenceWitness> match_rotating(const FourierSeries& g1, double beta1, const FourierSeries& g2,
                                                 double beta2, double tol = 1e-8);

/// Looks for y2(t) = epsilon y1(t - u) with u a multiple of the grid step.
/// Both functions are taken to vanish off the sampled window. Witness iff
/// the aligned relative L^alpha distance is below tol.
std::optional<EquivalenceWitness> shift_sign_equivalent(const PathFunction& y1, const PathFunction& y2, double alpha,
                                                        double tol = 1e-6);

nlohmann::json to_json(const SphereMeasure& m);
nlohmann::json to_json(const EquivalenceWitness& w);

}  // namespace sssi
