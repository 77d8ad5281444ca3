#include "sssi/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "sssi/errors.hpp"
#include "sssi/rng.hpp"

namespace sssi {

namespace {

void axpy(double c, const Element& x, Element& y) {
  if (y.size() < x.size()) y.resize(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

Element difference(const Element& x, const Element& y) {
  Element d(std::max(x.size(), y.size()), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) d[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) d[i] -= y[i];
  return d;
}

// Variation over the uniform n-partition with every interior point where the
// increments change sign moved to the local extremum of f between its
// neighbours (golden-section search). Recovers turning points that fall
// strictly inside a partition interval.
double turning_point_variation(const Curve& f, double a, double b, std::size_t n) {
  std::vector<double> t(n + 1), v(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    t[j] = j == n ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n);
    v[j] = f(t[j])[0];
  }
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double up = v[j] - v[j - 1], down = v[j + 1] - v[j];
    if (!(up * down < 0.0)) continue;
    const double sign = up > 0.0 ? 1.0 : -1.0;  // maximize sign * f
    double lo = t[j - 1], hi = t[j + 1];
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = sign * f(x1)[0], f2 = sign * f(x2)[0];
    for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = sign * f(x2)[0];
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = sign * f(x1)[0];
      }
    }
    const double best = f1 > f2 ? x1 : x2;
    if (sign * f(best)[0] > sign * v[j]) {
      t[j] = best;
      v[j] = f(best)[0];
    }
  }
  double variation = 0.0;
  for (std::size_t j = 1; j <= n; ++j) variation += std::abs(v[j] - v[j - 1]);
  return variation;
}

}  // namespace

ValueSpace scalar_space() {
  return {[](std::span<const double> y) { return y.empty() ? 0.0 : std::abs(y[0]); }};
}

ValueSpace ensemble_space() {
  return {[](std::span<const double> y) {
    if (y.empty()) return 0.0;
    double s = 0.0;
    for (double v : y) s += std::min(std::abs(v), 1.0);
    return s / static_cast<double>(y.size());
  }};
}

Curve ensemble_curve(const PathEnsemble& ensemble) {
  auto e = std::make_shared<const PathEnsemble>(ensemble);
  if (e->times.size() < 2) throw ParameterError("ensemble_curve: needs at least two grid times");
  return [e](double t) {
    const auto& times = e->times;
    if (t < times.front() || t > times.back()) throw ParameterError("ensemble_curve: t is off the ensemble grid");
    auto hi = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
    hi = std::clamp<std::size_t>(hi, 1, times.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    Element y(e->n_paths);
    for (std::size_t p = 0; p < e->n_paths; ++p) y[p] = (1.0 - w) * e->at(p, lo) + w * e->at(p, hi);
    return y;
  };
}

Multiplier Multiplier::constant(double c) {
  Multiplier m;
  m.values_ = {c};
  return m;
}

Multiplier Multiplier::step(std::vector<double> knots, std::vector<double> values) {
  if (values.size() != knots.size() + 1) throw ParameterError("Multiplier::step needs one more value than knots");
  if (!std::is_sorted(knots.begin(), knots.end()) ||
      std::adjacent_find(knots.begin(), knots.end()) != knots.end())
    throw ParameterError("Multiplier::step knots must be strictly increasing");
  Multiplier m;
  m.knots_ = std::move(knots);
  m.values_ = std::move(values);
  return m;
}

Multiplier Multiplier::smooth(std::function<double(double)> fn) {
  Multiplier m;
  m.fn_ = std::move(fn);
  return m;
}

double Multiplier::operator()(double t) const {
  if (fn_) return fn_(t);
  // First knot >= t: t sits on the piece ending at that knot.
  const auto i = static_cast<std::size_t>(std::lower_bound(knots_.begin(), knots_.end(), t) - knots_.begin());
  return values_[i];
}

RiemannResult integrate(const Curve& f, const Multiplier& phi, double a, double b, double tol,
                        const ValueSpace& space, int max_depth) {
  if (!(b > a)) throw ParameterError("integrate requires a < b");
  if (!(tol > 0.0)) throw ParameterError("integrate requires tol > 0");
  std::vector<double> edges{a};
  for (double k : phi.knots())
    if (k > a && k < b) edges.push_back(k);
  edges.push_back(b);

  RiemannResult out;
  out.certificate.tol = tol;
  Element previous;
  for (int level = 0; level <= max_depth; ++level) {
    const std::size_t per_piece = std::size_t{1} << level;
    Element sum;
    for (std::size_t piece = 0; piece + 1 < edges.size(); ++piece) {
      const double lo = edges[piece];
      const double h = (edges[piece + 1] - lo) / static_cast<double>(per_piece);
      for (std::size_t i = 0; i < per_piece; ++i) {
        const double t = lo + (static_cast<double>(i) + 0.5) * h;
        const double w = phi(t);
        if (w != 0.0) axpy(h * w, f(t), sum);
      }
    }
    out.certificate.partition_sizes.push_back(per_piece * (edges.size() - 1));
    if (level > 0) {
      const double d = space.fnorm(difference(sum, previous));
      out.certificate.distances.push_back(d);
      if (level >= 2 && d < tol) {
        out.certificate.converged = true;
        out.value = std::move(sum);
        return out;
      }
    }
    previous = std::move(sum);
  }
  return out;
}

Curve antiderivative(const Curve& f, double a, double b, double tol, const ValueSpace& space) {
  if (!(b > a)) throw ParameterError("antiderivative requires a < b");
  auto known = std::make_shared<std::map<double, Element>>();
  (*known)[a] = Element(f(a).size(), 0.0);
  const Multiplier one = Multiplier::constant(1.0);
  return [=](double t) {
    if (t < a || t > b) throw ParameterError("antiderivative: t is outside [a, b]");
    auto it = known->upper_bound(t);
    --it;
    if (it->first == t) return it->second;
    const double lo = it->first;
    RiemannResult piece = integrate(f, one, lo, t, 0.1 * tol * (t - lo) / (b - a), space);
    if (!piece.value) throw DivergenceError("antiderivative: the integral over a gap did not converge");
    Element v = it->second;
    axpy(1.0, *piece.value, v);
    (*known)[t] = v;
    return v;
  };
}

FubiniReport check_fubini(const Curve& f, const Multiplier& phi, double a, double b, double tol,
                          const ValueSpace& space) {
  const Curve big_f = antiderivative(f, a, b, tol, space);
  RiemannResult lhs = integrate(big_f, phi, a, b, tol, space);
  if (!lhs.value) throw DivergenceError("check_fubini: int phi F did not converge");

  const Curve one = [](double) { return Element{1.0}; };
  const Multiplier tail = Multiplier::smooth([&](double t) {
    if (t >= b) return 0.0;
    RiemannResult r = integrate(one, phi, t, b, 0.1 * tol / (b - a));
    if (!r.value) throw DivergenceError("check_fubini: int_t^b phi did not converge");
    return (*r.value)[0];
  });
  RiemannResult rhs = integrate(f, tail, a, b, tol, space);
  if (!rhs.value) throw DivergenceError("check_fubini: int (int_t^b phi) f did not converge");

  FubiniReport rep;
  rep.lhs = *lhs.value;
  rep.rhs = *rhs.value;
  rep.residual = space.fnorm(difference(rep.lhs, rep.rhs));
  return rep;
}

SemivariationEstimate semivariation(const Curve& f, double a, double b, double delta, std::size_t budget,
                                    const ValueSpace& space, std::size_t random_patterns, std::uint64_t seed) {
  if (!(delta > 0.0)) throw ParameterError("semivariation requires delta > 0");
  if (!(b > a)) throw ParameterError("semivariation requires a < b");
  if (budget < 1) throw ParameterError("semivariation requires a partition budget of at least 1");
  SemivariationEstimate est;
  const Philox4x32 rng(seed);
  std::uint64_t draw = 0;
  for (std::size_t n = 1; n <= budget; n *= 2) {
    ++est.partitions_tried;
    std::vector<Element> inc(n);
    Element prev = f(a);
    for (std::size_t j = 1; j <= n; ++j) {
      const double t = j == n ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n);
      Element cur = f(t);
      inc[j - 1] = difference(cur, prev);
      prev = std::move(cur);
    }
    const std::size_t dim = inc.front().size();
    if (dim == 1) {
      // c_j = delta sign(Delta f_j) attains delta * sum |Delta f_j|.
      double variation = 0.0;
      for (const auto& d : inc) variation += std::abs(d[0]);
      ++est.patterns_tried;
      est.value = std::max(est.value, delta * variation);
      if (2 * n > budget) {
        ++est.partitions_tried;
        est.value = std::max(est.value, delta * turning_point_variation(f, a, b, n));
      }
      continue;
    }
    auto evaluate = [&](const std::vector<double>& c) {
      Element s(dim, 0.0);
      for (std::size_t j = 0; j < n; ++j) axpy(c[j], inc[j], s);
      ++est.patterns_tried;
      est.value = std::max(est.value, space.fnorm(s));
    };
    std::vector<double> c(n);
    // At most 32 coordinates get their own sign pattern.
    const std::size_t stride = std::max<std::size_t>(1, dim / 32);
    for (std::size_t coord = 0; coord < dim; coord += stride) {
      for (std::size_t j = 0; j < n; ++j) c[j] = inc[j][coord] >= 0.0 ? delta : -delta;
      evaluate(c);
    }
    for (std::size_t r = 0; r < random_patterns; ++r) {
      for (std::size_t j = 0; j < n; j += 2) {
        const auto u = rng.uniform_pair(1, draw++);
        c[j] = u[0] < 0.5 ? delta : -delta;
        if (j + 1 < n) c[j + 1] = u[1] < 0.5 ? delta : -delta;
      }
      evaluate(c);
    }
  }
  return est;
}

}  // namespace sssi
