#include "sssi/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "sssi/errors.hpp"

namespace sssi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_of(const std::array<double, 2>& d) { return std::atan2(d[1], d[0]); }

double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

double wrap(double x) {
  double r = std::fmod(x, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

// Complex coefficient z_k with g(s) = Re sum_k z_k e^{iks}.
std::map<int, std::complex<double>> coefficients(const FourierSeries& g) {
  std::map<int, std::complex<double>> z;
  for (const auto& h : g.harmonics) z[h.k] += std::complex<double>(h.cos, -h.sin);
  return z;
}

}  // namespace

double alpha_norm(const std::array<double, 2>& b, double alpha) {
  return std::pow(std::pow(std::abs(b[0]), alpha) + std::pow(std::abs(b[1]), alpha), 1.0 / alpha);
}

SphereMeasure mixing_measure(std::span<const MixingAtom> atoms, double alpha, bool symmetrize) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("mixing_measure requires 0 < alpha <= 2");
  SphereMeasure m;
  m.alpha = alpha;
  m.symmetrized = symmetrize;
  auto add = [&](std::array<double, 2> dir, double w) {
    for (auto& a : m.atoms)
      if (angle_gap(angle_of(a.direction), angle_of(dir)) < 1e-12) {
        a.weight += w;
        return;
      }
    m.atoms.push_back({dir, w});
  };
  for (const auto& atom : atoms) {
    if (!(atom.weight > 0.0)) throw ParameterError("mixing_measure: atom weights must be positive");
    const double r = alpha_norm(atom.b, alpha);
    if (r == 0.0) throw ParameterError("mixing_measure: the atom at b = (0, 0) has no direction");
    const std::array<double, 2> dir{atom.b[0] / r, atom.b[1] / r};
    const double w = atom.weight * std::pow(r, alpha);
    add(dir, w);
    if (symmetrize) add({-dir[0], -dir[1]}, w);
  }
  std::sort(m.atoms.begin(), m.atoms.end(),
            [](const SphereAtom& x, const SphereAtom& y) { return angle_of(x.direction) < angle_of(y.direction); });
  return m;
}

bool same_sphere_measure(const SphereMeasure& m1, const SphereMeasure& m2, double tol) {
  if (m1.atoms.size() != m2.atoms.size()) return false;
  std::vector<bool> used(m2.atoms.size(), false);
  for (const auto& a : m1.atoms) {
    bool found = false;
    for (std::size_t j = 0; j < m2.atoms.size() && !found; ++j) {
      if (used[j]) continue;
      const auto& b = m2.atoms[j];
      if (angle_gap(angle_of(a.direction), angle_of(b.direction)) > tol) continue;
      if (std::abs(a.weight - b.weight) > tol * std::max(a.weight, b.weight)) continue;
      used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

bool same_mixed_lfsm(const MixedLfsm& q1, const MixedLfsm& q2, double tol) {
  if (q1.alpha != q2.alpha || q1.hurst != q2.hurst) return false;
  return same_sphere_measure(mixing_measure(q1.atoms, q1.alpha), mixing_measure(q2.atoms, q2.alpha), tol);
}

bool ray_test(std::span<const MixingAtom> atoms) {
  const MixingAtom* first = nullptr;
  for (const auto& a : atoms) {
    if (a.b[0] == 0.0 && a.b[1] == 0.0) throw ParameterError("ray_test: the atom at b = (0, 0) has no direction");
    if (first == nullptr) {
      first = &a;
      continue;
    }
    const double cross = first->b[0] * a.b[1] - first->b[1] * a.b[0];
    const double scale = std::hypot(first->b[0], first->b[1]) * std::hypot(a.b[0], a.b[1]);
    if (std::abs(cross) > 1e-12 * scale) return false;
  }
  return true;
}

double minimal_period(const FourierSeries& g) {
  const auto active = g.active_harmonics();
  if (active.empty()) throw ParameterError("minimal_period: g has no nonconstant harmonic");
  int d = 0;
  for (int k : active) d = std::gcd(d, k);
  return kTwoPi / d;
}

bool is_periodically_minimal(const FourierSeries& g) {
  const auto active = g.active_harmonics();
  if (active.empty()) throw ParameterError("is_periodically_minimal: g has no nonconstant harmonic");
  int d = 0;
  for (int k : active) d = std::gcd(d, k);
  return d == 1;
}

std::optional<EquivalenceWitness> match_rotating(const FourierSeries& g1, double beta1, const FourierSeries& g2,
                                                 double beta2, double tol) {
  if (!is_periodically_minimal(g1) || !is_periodically_minimal(g2))
    throw ParameterError("match_rotating needs g1 and g2 that are periodically minimal (2 pi is the minimal period)");
  if (beta1 != beta2) return std::nullopt;

  const auto z1 = coefficients(g1);
  const auto z2 = coefficients(g2);
  const int k0 = g1.active_harmonics().front();
  const std::complex<double> a = z1.at(k0);
  const auto it = z2.find(k0);
  if (it == z2.end() || std::abs(it->second) == 0.0) return std::nullopt;

  constexpr int kGrid = 1024;
  double g2_scale = 0.0;
  for (int i = 0; i < kGrid; ++i) g2_scale = std::max(g2_scale, std::abs(g2(kTwoPi * i / kGrid)));
  g2_scale = std::max(g2_scale, 1.0);

  std::optional<EquivalenceWitness> best;
  for (int eps : {1, -1}) {
    // eps z1_k0 e^{i k0 tau} = z2_k0
    const double phase = std::arg(it->second / (static_cast<double>(eps) * a));
    for (int m = 0; m < k0; ++m) {
      const double tau = wrap((phase + kTwoPi * m) / k0);
      const double c = g2.constant - eps * g1.constant;
      double residual = 0.0;
      for (int i = 0; i < kGrid; ++i) {
        const double s = kTwoPi * i / kGrid;
        residual = std::max(residual, std::abs(g2(s) - eps * g1(s + tau) - c));
      }
      residual /= g2_scale;
      if (residual >= tol) continue;
      const double dist = std::min(tau, kTwoPi - tau);
      if (!best || dist < std::min(best->shift, kTwoPi - best->shift) - 1e-12)
        best = EquivalenceWitness{eps, tau, c, residual};
    }
  }
  if (best && kTwoPi - best->shift < best->shift) best->shift -= kTwoPi;
  return best;
}

std::optional<EquivalenceWitness> shift_sign_equivalent(const PathFunction& y1, const PathFunction& y2, double alpha,
                                                        double tol) {
  if (y1.times != y2.times) throw ParameterError("shift_sign_equivalent: y1 and y2 must share one sampling grid");
  if (y1.values.size() != y1.times.size() || y2.values.size() != y2.times.size())
    throw ParameterError("shift_sign_equivalent: times and values differ in length");
  const std::size_t n = y1.times.size();
  if (n < 2) throw ParameterError("shift_sign_equivalent: needs at least two grid points");
  const double step = (y1.times.back() - y1.times.front()) / static_cast<double>(n - 1);
  double norm2 = 0.0;
  for (double v : y2.values) norm2 += std::pow(std::abs(v), alpha);
  if (norm2 == 0.0) throw ParameterError("shift_sign_equivalent: y2 vanishes on the grid");

  std::optional<EquivalenceWitness> best;
  const auto span = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t j = -(span - 1); j < span; ++j) {
    for (int eps : {1, -1}) {
      double dist = 0.0;
      for (std::ptrdiff_t i = 0; i < span && dist <= norm2; ++i) {
        const std::ptrdiff_t src = i - j;
        const double shifted = src >= 0 && src < span ? y1.values[static_cast<std::size_t>(src)] : 0.0;
        dist += std::pow(std::abs(y2.values[static_cast<std::size_t>(i)] - eps * shifted), alpha);
      }
      const double rel = std::pow(dist / norm2, 1.0 / alpha);
      if (!best || rel < best->residual) best = EquivalenceWitness{eps, static_cast<double>(j) * step, 0.0, rel};
    }
  }
  if (best && best->residual < tol) return best;
  return std::nullopt;
}

nlohmann::json to_json(const SphereMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"direction", a.direction}, {"weight", a.weight}});
  return {{"alpha", m.alpha}, {"symmetrized", m.symmetrized}, {"atoms", atoms}};
}

nlohmann::json to_json(const EquivalenceWitness& w) {
  return {{"epsilon", w.epsilon}, {"shift", w.shift}, {"constant", w.constant}, {"residual", w.residual}};
}

}  // namespace sssi
