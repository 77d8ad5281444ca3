#include "sssi/stable_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "sssi/errors.hpp"
#include "sssi/parallel.hpp"
#include "sssi/rng.hpp"

namespace sssi {

namespace {

// Counter stream reserved for i.i.d. sampling, disjoint from path streams.
constexpr std::uint64_t kSamplerStream = ~std::uint64_t{0};

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in (0, 2]");
}

struct ShiftCell {
  double center;
  double width;
};

/// Uniform cells of width w over the breakpoint hull, geometric cells
/// outward while the support continues.
std::vector<ShiftCell> shift_cells(std::vector<double> bps, std::pair<double, double> support, double w,
                                   const GridPolicy& grid, double span) {
  auto [lo, hi] = support;
  std::vector<ShiftCell> out;
  if (!(hi > lo)) return out;
  double h_lo = std::numeric_limits<double>::infinity(), h_hi = -h_lo;
  for (double b : bps) {
    h_lo = std::min(h_lo, std::clamp(b, lo, hi));
    h_hi = std::max(h_hi, std::clamp(b, lo, hi));
  }
  if (!(h_hi > h_lo)) {
    if (!std::isfinite(h_lo)) h_lo = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    h_hi = h_lo;
  }
  if (h_hi > h_lo) {
    const auto n = static_cast<std::size_t>(std::ceil((h_hi - h_lo) / w - 1e-9));
    const double width = (h_hi - h_lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back({h_lo + (static_cast<double>(i) + 0.5) * width, width});
  }
  const double limit = grid.reach * std::max(span, 1.0);
  auto grow = [&](double edge, double end, double dir) {
    double width = w;
    double pos = edge;
    while (dir * (end - pos) > 0.0 && std::abs(pos - edge) < limit) {
      double next = pos + dir * width;
      if (dir * (next - end) > 0.0) next = end;
      out.push_back({0.5 * (pos + next), std::abs(next - pos)});
      pos = next;
      width *= grid.growth;
    }
  };
  grow(h_lo, lo, -1.0);
  grow(h_hi, hi, 1.0);
  std::sort(out.begin(), out.end(), [](const ShiftCell& a, const ShiftCell& b) { return a.center < b.center; });
  return out;
}

double finest_spacing(std::span<const double> times) {
  std::vector<double> pts(times.begin(), times.end());
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] > pts[i - 1]) d = std::min(d, pts[i] - pts[i - 1]);
  return std::isfinite(d) ? d : 1.0;
}

double power_mass(double lo, double hi, double gamma) {
  if (std::abs(gamma + 1.0) < 1e-14) return std::log(hi / lo);
  return (std::pow(hi, gamma + 1.0) - std::pow(lo, gamma + 1.0)) / (gamma + 1.0);
}

}  // namespace

std::vector<double> LinearCombo::thetas() const {
  std::vector<double> out;
  for (const auto& t : terms) out.push_back(t.theta);
  return out;
}

std::vector<double> LinearCombo::times() const {
  std::vector<double> out;
  for (const auto& t : terms) out.push_back(t.t);
  return out;
}

LinearCombo LinearCombo::scaled(double c) const {
  LinearCombo out = *this;
  for (auto& t : out.terms) t.t *= c;
  return out;
}

LinearCombo LinearCombo::shifted_increments(double h) const {
  LinearCombo out;
  double total = 0.0;
  for (const auto& t : terms) {
    out.terms.push_back({t.theta, t.t + h});
    total += t.theta;
  }
  out.terms.push_back({-total, h});
  return out;
}

std::vector<LinearCombo> default_probes() {
  return {
      {{{1.0, 1.0}}},
      {{{-0.5, 2.0}}},
      {{{1.0, 0.5}, {-1.0, 1.5}}},
      {{{0.5, 1.0}, {1.0, 2.0}}},
      {{{-1.0, 0.25}, {0.5, 1.0}}},
      {{{1.0, 0.5}, {0.5, 1.0}, {-0.5, 2.0}}},
      {{{-1.0, 1.0}, {1.0, 1.5}, {-0.5, 3.0}}},
      {{{0.5, 0.75}, {-1.0, 1.25}, {1.0, 2.5}}},
  };
}

double sas_from_uniforms(double alpha, double u_angle, double u_exp) {
  const double v = std::numbers::pi * (u_angle - 0.5);
  const double w = -std::log(u_exp);
  if (alpha == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

std::vector<double> sample_standard_sas(double alpha, std::size_t n, std::uint64_t seed) {
  require_alpha(alpha);
  if (n == 0) throw ParameterError("sample count must be at least 1");
  Philox4x32 rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto u = rng.uniform_pair(kSamplerStream, i);
    out[i] = sas_from_uniforms(alpha, u[0], u[1]);
  }
  return out;
}

std::vector<Cell> discretize(const Kernel& kernel, std::span<const double> times, const GridPolicy& grid) {
  const KernelModel& model = kernel.model();
  const double w = finest_spacing(times) / std::max(1, grid.cells_per_step);
  double t_lo = 0.0, t_hi = 0.0;
  for (double t : times) {
    t_lo = std::min(t_lo, t);
    t_hi = std::max(t_hi, t);
  }
  const double span = t_hi - t_lo;
  std::vector<double> all_times(times.begin(), times.end());
  std::vector<Cell> cells;

  auto add_line = [&](std::size_t atom, double x, double mass_factor, double width) {
    Point base{atom, x, 0.0};
    auto sc = shift_cells(model.shift_breakpoints(all_times, base), model.shift_support(all_times, base), width,
                          grid, span);
    for (const auto& c : sc) cells.push_back({{atom, x, c.center}, c.width * mass_factor});
  };

  std::visit(
      [&](const auto& mix) {
        using M = std::decay_t<decltype(mix)>;
        if constexpr (std::is_same_v<M, NoMixing>) {
          add_line(0, 1.0, 1.0, w);
        } else if constexpr (std::is_same_v<M, AtomicMixing>) {
          for (std::size_t i = 0; i < mix.weights.size(); ++i) add_line(i, 1.0, mix.weights[i], w);
        } else {
          const int n = std::max(2, grid.radial_points);
          const double lmin = std::log(grid.radial_min), lmax = std::log(grid.radial_max);
          for (int i = 0; i + 1 < n; ++i) {
            const double lo = std::exp(lmin + (lmax - lmin) * i / (n - 1));
            const double hi = std::exp(lmin + (lmax - lmin) * (i + 1) / (n - 1));
            const double x = std::sqrt(lo * hi);
            const double mass = power_mass(lo, hi, mix.exponent);
            if (model.shift_space() == ShiftSpace::circle) {
              const int m = std::max(1, grid.circle_cells);
              const double width = 2.0 * std::numbers::pi / m;
              for (int j = 0; j < m; ++j) cells.push_back({{0, x, (j + 0.5) * width}, width * mass});
            } else {
              // Cap the uniform core so very wide supports stay tractable.
              Point base{0, x, 0.0};
              auto bps = model.shift_breakpoints(all_times, base);
              double hull = 0.0;
              if (!bps.empty()) hull = *std::max_element(bps.begin(), bps.end()) - *std::min_element(bps.begin(), bps.end());
              add_line(0, x, mass, std::max(w, hull / 512.0));
            }
          }
        }
      },
      model.mixing());
  return cells;
}

double discretized_cf_exponent(const Kernel& kernel, std::span<const Cell> cells, const LinearCombo& combo) {
  std::vector<double> parts(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double v = 0.0;
    for (const auto& term : combo.terms)
      if (term.theta != 0.0) v += term.theta * kernel(term.t, cells[c].center);
    parts[c] = abs_pow(v, kernel.alpha()) * cells[c].mass;
  }
  return pairwise_sum(parts);
}

PathEnsemble simulate(const Kernel& kernel, std::span<const double> times, std::size_t n_paths, std::uint64_t seed,
                      const SimulationOptions& options) {
  if (times.empty()) throw ParameterError("time grid must be nonempty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw ParameterError("time grid must be finite");
    if (i > 0 && !(times[i] > times[i - 1])) throw ParameterError("time grid must be strictly increasing");
  }
  if (n_paths == 0) throw ParameterError("n_paths must be at least 1");
  const double alpha = kernel.alpha();
  const std::vector<Cell> cells = discretize(kernel, times, options.grid);

  // Per time: nonzero (cell, coefficient) pairs, coefficient = f_t * mass^(1/alpha).
  struct Entry {
    std::size_t cell;
    double coef;
  };
  std::vector<std::vector<Entry>> rows(times.size());
  std::vector<char> used(cells.size(), 0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double scale = std::pow(cells[c].mass, 1.0 / alpha);
    if (scale == 0.0) continue;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double f = kernel(times[i], cells[c].center);
      if (f == 0.0) continue;
      rows[i].push_back({c, f * scale});
      used[c] = 1;
    }
  }

  PathEnsemble out;
  out.times.assign(times.begin(), times.end());
  out.values.assign(n_paths * times.size(), 0.0);
  out.n_paths = n_paths;
  out.seed = seed;
  out.spec_digest = spec_digest(kernel.spec());
  if (kernel.is_increment()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "+lag%.17g", kernel.increment_lag());
    out.spec_digest += buf;
  }

  const Philox4x32 rng(seed);
  parallel_for(n_paths, options.threads, [&](std::size_t path) {
    std::vector<double> noise(cells.size(), 0.0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!used[c]) continue;
      auto u = rng.uniform_pair(path, c);
      noise[c] = sas_from_uniforms(alpha, u[0], u[1]);
    }
    std::vector<double> terms;
    for (std::size_t i = 0; i < times.size(); ++i) {
      terms.resize(rows[i].size());
      for (std::size_t k = 0; k < rows[i].size(); ++k) terms[k] = rows[i][k].coef * noise[rows[i][k].cell];
      out.values[path * times.size() + i] = pairwise_sum(terms);
    }
  });
  return out;
}

std::complex<double> empirical_cf(const PathEnsemble& ensemble, const LinearCombo& combo) {
  std::vector<std::pair<double, std::size_t>> terms;
  for (const auto& term : combo.terms) {
    if (term.theta == 0.0) continue;
    auto it = std::lower_bound(ensemble.times.begin(), ensemble.times.end(),
                               term.t - 1e-12 * std::max(1.0, std::abs(term.t)));
    if (it == ensemble.times.end() || std::abs(*it - term.t) > 1e-12 * std::max(1.0, std::abs(term.t)))
      throw LookupError("probe time " + std::to_string(term.t) + " is not on the ensemble grid");
    terms.emplace_back(term.theta, static_cast<std::size_t>(it - ensemble.times.begin()));
  }
  if (terms.empty() || ensemble.n_paths == 0) return {1.0, 0.0};
  std::vector<double> re(ensemble.n_paths), im(ensemble.n_paths);
  for (std::size_t p = 0; p < ensemble.n_paths; ++p) {
    double arg = 0.0;
    for (const auto& [theta, idx] : terms) arg += theta * ensemble.at(p, idx);
    re[p] = std::cos(arg);
    im[p] = std::sin(arg);
  }
  const double n = static_cast<double>(ensemble.n_paths);
  return {pairwise_sum(re) / n, pairwise_sum(im) / n};
}

std::string spec_digest(const FamilySpec& spec) {
  const std::string text = to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sssi
