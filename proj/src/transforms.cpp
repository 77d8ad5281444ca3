#include "sssi/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sssi/errors.hpp"
#include "sssi/parallel.hpp"

namespace sssi {

namespace {

void require_grid(const PathFunction& p, const char* who) {
  if (p.times.size() != p.values.size()) throw ParameterError(std::string(who) + ": times and values differ in length");
  if (p.times.size() < 2) throw ParameterError(std::string(who) + ": needs at least two grid points");
  for (std::size_t i = 1; i < p.times.size(); ++i)
    if (!(p.times[i] > p.times[i - 1])) throw ParameterError(std::string(who) + ": times must be strictly increasing");
}

bool equally_spaced(std::span<const double> u) {
  const double step = (u.back() - u.front()) / static_cast<double>(u.size() - 1);
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs((u[i] - u[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) return false;
  return true;
}

}  // namespace

MasaniForward masani_forward(const PathFunction& x, double history) {
  require_grid(x, "masani_forward");
  if (!(history > 0.0)) throw ParameterError("masani_forward: history L must be positive");
  const double start = -history;
  if (x.times.front() > start + 1e-12 * std::max(1.0, history))
    throw ParameterError("masani_forward: the grid must reach back to -L = " + std::to_string(start) +
                         "; it starts at " + std::to_string(x.times.front()));
  MasaniForward out;
  // First grid point at or after -L.
  std::size_t k = 0;
  while (k < x.times.size() && x.times[k] < start - 1e-12 * std::max(1.0, history)) ++k;
  double window = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = k; i < x.times.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(x.values[i]));
    if (i > k) {
      const double dt = x.times[i] - x.times[i - 1];
      const double decay = std::exp(-dt);
      window = decay * window + 0.5 * dt * (decay * x.values[i - 1] + x.values[i]);
    }
    if (x.times[i] >= 0.0) {
      out.y.times.push_back(x.times[i]);
      out.y.values.push_back(x.values[i] - window);
    }
  }
  if (out.y.times.empty()) throw ParameterError("masani_forward: the grid has no point at t >= 0");
  out.truncation_bound = std::exp(-history) * max_abs;
  return out;
}

PathFunction masani_inverse(const PathFunction& y) {
  require_grid(y, "masani_inverse");
  PathFunction x;
  x.times = y.times;
  x.values.resize(y.values.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < y.times.size(); ++i) {
    if (i > 0) integral += y.values[i - 1] * (y.times[i] - y.times[i - 1]);
    x.values[i] = y.values[i] - y.values[0] + integral;
  }
  return x;
}

PathFunction lamperti_to_stationary(const PathFunction& x, double hurst) {
  require_grid(x, "lamperti_to_stationary");
  if (!(x.times.front() > 0.0)) throw ParameterError("lamperti_to_stationary: times must be positive");
  std::vector<double> logs(x.times.size());
  std::transform(x.times.begin(), x.times.end(), logs.begin(), [](double t) { return std::log(t); });
  if (!equally_spaced(logs))
    throw ParameterError("lamperti_to_stationary: the grid must be geometric (no interpolation is done)");
  PathFunction y;
  y.times = std::move(logs);
  y.values.resize(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i) y.values[i] = std::pow(x.times[i], -hurst) * x.values[i];
  return y;
}

PathFunction lamperti_from_stationary(const PathFunction& y, double hurst) {
  require_grid(y, "lamperti_from_stationary");
  if (!equally_spaced(y.times))
    throw ParameterError("lamperti_from_stationary: the grid must be equally spaced (no interpolation is done)");
  PathFunction x;
  x.times.resize(y.times.size());
  x.values.resize(y.values.size());
  for (std::size_t i = 0; i < y.times.size(); ++i) {
    x.times[i] = std::exp(y.times[i]);
    x.values[i] = std::pow(x.times[i], hurst) * y.values[i];
  }
  return x;
}

Kernel increment_process(const Kernel& kernel, double lag) { return make_increment_kernel(kernel, lag); }

PathEnsemble transform_paths(const PathEnsemble& in, const std::function<PathFunction(const PathFunction&)>& fn,
                             unsigned threads) {
  std::vector<PathFunction> rows(in.n_paths);
  parallel_for(in.n_paths, threads, [&](std::size_t i) {
    auto path = in.path(i);
    rows[i] = fn(PathFunction{in.times, std::vector<double>(path.begin(), path.end())});
  });
  PathEnsemble out;
  out.n_paths = in.n_paths;
  out.seed = in.seed;
  out.spec_digest = in.spec_digest;
  if (rows.empty()) return out;
  out.times = rows.front().times;
  out.values.reserve(out.times.size() * rows.size());
  for (const auto& r : rows) {
    if (r.times != out.times) throw ParameterError("transform_paths: rows came back on different grids");
    out.values.insert(out.values.end(), r.values.begin(), r.values.end());
  }
  return out;
}

}  // namespace sssi
