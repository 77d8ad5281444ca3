// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sssi/flows.hpp"
#include "sssi/identifiability.hpp"
#include "sssi/io.hpp"
#include "sssi/region.hpp"
#include "sssi/riemann.hpp"
#include "sssi/rng.hpp"
#include "sssi/stable_core.hpp"
#include "sssi/transforms.hpp"
#include "sssi/verify.hpp"

using namespace sssi;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const FourierSeries kCos{0.0, {{1, 1.0, 0.0}}};

std::vector<double> probe_grid(const std::vector<LinearCombo>& probes) {
  std::set<double> grid;
  for (const auto& p : probes)
    for (double t : p.times()) grid.insert(t);
  return {grid.begin(), grid.end()};
}

// 1. Sampler law.
void sampler_law(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double alpha : {0.8, 1.0, 1.5, 2.0}) {
    const auto x = sample_standard_sas(alpha, 100000, 1);
    for (double theta : {0.25, 0.5, 1.0, 2.0, 3.0}) {
      double s = 0.0;
      for (double v : x) s += std::cos(theta * v);
      worst = std::max(worst, std::abs(s / x.size() - std::exp(-std::pow(theta, alpha))));
    }
  }
  const double elapsed = seconds_since(start);
  o.detail << "max |cf - exp(-|theta|^alpha)| = " << worst << " (< 0.02), " << elapsed << " s (< 10)";
  o.require(worst < 0.02, "cf deviation");
  o.require(elapsed < 10.0, "runtime");
}

// 2. Simulator against the cf-exponent oracle.
void simulator_oracle(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto probes = default_probes();
  const auto times = probe_grid(probes);
  double worst = 0.0;
  for (const FamilySpec& spec : {FamilySpec{LinearMotion{1.5, 1.0, 0.0}}, FamilySpec{Lfsm{1.5, 0.7, 1.0, 0.0}}}) {
    const Kernel k = build(spec);
    const auto e = simulate(k, times, 10000, 2);
    const auto r = mc_distribution_check(e, k, probes, 0.05);
    o.require(r.passed, family_name(spec));
    worst = std::max(worst, r.max_residual());
  }
  const double elapsed = seconds_since(start);
  o.detail << "max |empirical cf - exp(-sigma^alpha)| = " << worst << " (< 0.05), " << elapsed << " s (< 60)";
  o.require(elapsed < 60.0, "runtime");
}

std::vector<FamilySpec> catalog() {
  return {Lfsm{1.5, 0.7, 1.0, 0.0},
          LinearMotion{1.5, 1.0, 0.0},
          LogFractional{1.5, 1.0},
          MixedLfsm{1.5, 0.7, {{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.5}}},
          TruncatedFractional{1.5, 0.5, 0.5},
          Chentsov{1.25, 0.5},
          RotatingAverage{1.5, 0.8, kCos}};
}

// 3. Stationary increments.
void stationary_increments(Outcome& o) {
  const auto probes = default_probes();
  const std::vector<double> shifts{0.5, 1.0, 2.0, 5.0};
  double worst = 0.0;
  for (const auto& spec : catalog()) {
    const auto r = check_stationary_increments(build(spec), probes, shifts, 1e-3);
    o.require(r.passed, family_name(spec) + (r.message.empty() ? "" : ": " + r.message));
    worst = std::max(worst, r.max_residual());
    o.detail << family_name(spec) << " " << r.refinement_trace.front() << "->" << r.refinement_trace.back() << "; ";
  }
  o.detail << "max deviation " << worst << " (< 1e-3)";
}

// 4. Self-similarity exponent.
void self_similarity(Outcome& o) {
  const auto probes = default_probes();
  const std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<std::pair<FamilySpec, double>> cases{
      {Lfsm{1.5, 0.7, 1.0, 0.0}, 0.7},
      {TruncatedFractional{1.5, 0.5, 0.5}, 5.0 / 6.0},
      {Chentsov{1.25, 0.5}, 0.4},
      {Chentsov{0.5, 0.6}, 1.2},
      {LinearMotion{1.5, 1.0, 0.0}, 2.0 / 3.0},
      {RotatingAverage{1.5, 0.8, kCos}, 0.8 / 1.5},
  };
  double worst = 0.0;
  for (const auto& [spec, h] : cases) {
    const auto r = check_self_similar(build(spec), probes, scales, 0.01, {}, h);
    o.require(r.passed, family_name(spec));
    worst = std::max(worst, r.max_residual());
    o.detail << family_name(spec) << " H=" << r.fitted_hurst.value_or(NAN) << "; ";
  }
  o.detail << "max |slope/(alpha H) - 1| = " << worst << " (< 0.01)";
}

// 5. Region map.
void region(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = parse_range("-1:1:21");
  const auto map = region_map(1.5, grid, grid, region_policy(), 0.05);
  bool a0_divergent = true;
  for (const auto& p : map.points)
    if (p.a == 0.0) a0_divergent = a0_divergent && p.verdict == quad::Verdict::divergent;
  const double elapsed = seconds_since(start);
  o.detail << map.agreeing() << "/" << map.scored() << " scored points agree, a = 0 column "
           << (a0_divergent ? "divergent" : "NOT divergent") << ", " << elapsed << " s (< 300)";
  o.require(map.scored() > 0 && map.agreeing() == map.scored(), "agreement");
  o.require(a0_divergent, "a = 0 column");
  o.require(elapsed < 300.0, "runtime");
}

// 6. Hopf classification.
void hopf(Outcome& o) {
  const Philox4x32 rng(6);
  const std::size_t n = 40;
  std::size_t total = 0, correct = 0, wrong = 0, undecided = 0;
  auto tally = [&](const std::vector<HopfPoint>& result, HopfVerdict expect) {
    for (const auto& p : result) {
      ++total;
      if (p.verdict == expect) ++correct;
      else if (p.verdict == HopfVerdict::undecided) ++undecided;
      else ++wrong;
    }
  };

  std::vector<Point> line(n);
  for (std::size_t i = 0; i < n; ++i) line[i].s = -5.0 + 10.0 * rng.uniform_pair(0, i)[0];
  tally(hopf_classify(Flow::translation(), [](const Point& p) { return p.s >= 0.0 && p.s <= 1.0 ? 1.0 : 0.0; }, 1.5,
                      line),
        HopfVerdict::dissipative);
  for (const FamilySpec& spec : {FamilySpec{Lfsm{1.5, 0.7, 1.0, 0.0}}, FamilySpec{LinearMotion{1.5, 1.0, 0.0}},
                                 FamilySpec{Lfsm{1.2, 0.3, 1.0, -1.0}}}) {
    const Kernel k = build(spec);
    // Points where f_1 vanishes on the whole window are degenerate and skipped.
    tally(hopf_classify(Flow::translation(), [&k](const Point& p) { return k(1.0, p); }, k.alpha(), line),
          HopfVerdict::dissipative);
  }

  std::vector<Point> circle(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = rng.uniform_pair(1, i);
    circle[i].s = 2.0 * kPi * u[0];
    circle[i].x = std::exp(std::log(0.1) + u[1] * std::log(100.0));
  }
  for (const FourierSeries& g : {kCos, FourierSeries{0.5, {{1, 0.3, -1.0}, {2, 0.25, 0.0}}}})
    tally(hopf_classify(Flow::rotation(), [g](const Point& p) { return g(p.s); }, 1.5, circle),
          HopfVerdict::conservative);

  const double rate = static_cast<double>(correct) / static_cast<double>(total);
  o.detail << correct << "/" << total << " correct (" << 100.0 * rate << "% >= 95%), " << wrong << " misclassified, "
           << undecided << " undecided";
  o.require(rate >= 0.95, "correct rate");
  o.require(wrong == 0, "misclassified");
}

// 7. Masani round trip on one linear-motion ensemble refined by subsampling.
void masani(Outcome& o) {
  const double alpha = 1.5, history = 20.0;
  const int kmax = 8;
  const std::size_t steps = static_cast<std::size_t>((history + 1.0) * (1 << kmax));
  const std::size_t paths = 10;
  const auto noise = sample_standard_sas(alpha, steps * paths, 7);
  const double scale = std::pow(std::ldexp(1.0, -kmax), 1.0 / alpha);
  std::vector<double> errors;
  for (int k = 6; k <= kmax; ++k) {
    const std::size_t stride = std::size_t{1} << (kmax - k);
    double err = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
      PathFunction x;
      double level = 0.0;
      for (std::size_t i = 0; i <= steps; ++i) {
        if (i > 0) level += scale * noise[p * steps + i - 1];
        if (i % stride == 0) {
          x.times.push_back(-history + std::ldexp(static_cast<double>(i), -kmax));
          x.values.push_back(level);
        }
      }
      const auto back = masani_inverse(masani_forward(x, history).y);
      const std::size_t offset = x.times.size() - back.times.size();
      for (std::size_t i = 0; i < back.times.size(); ++i)
        err = std::max(err, std::abs(back.values[i] - (x.values[offset + i] - x.values[offset])));
    }
    errors.push_back(err);
  }
  o.detail << "max errors k=6,7,8: " << errors[0] << ", " << errors[1] << ", " << errors[2] << "; ratios "
           << errors[0] / errors[1] << ", " << errors[1] / errors[2] << " (in [1.7, 2.3])";
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    o.require(ratio >= 1.7 && ratio <= 2.3, "ratio");
  }
}

// 8. Lamperti round trip and kernel identities.
void lamperti(Outcome& o) {
  const Kernel k = build(Lfsm{1.5, 0.7, 1.0, 0.0});
  const auto times = parse_range("0.01:1:65", true);
  const auto e = simulate(k, times, 100, 8);
  double round_trip = 0.0;
  for (std::size_t p = 0; p < e.n_paths; ++p) {
    const auto path = e.path(p);
    const PathFunction x{e.times, {path.begin(), path.end()}};
    const auto back = lamperti_from_stationary(lamperti_to_stationary(x, 0.7), 0.7);
    for (std::size_t i = 0; i < x.values.size(); ++i)
      round_trip = std::max(round_trip, std::abs(back.values[i] - x.values[i]) / std::max(1.0, std::abs(x.values[i])));
  }
  double identity = 0.0;
  for (const FamilySpec& spec : {FamilySpec{Lfsm{1.5, 0.7, 1.0, -0.5}}, FamilySpec{LinearMotion{1.5, 1.0, 0.0}},
                                 FamilySpec{MixedLfsm{1.5, 0.4, {{{1.0, 0.0}, 1.0}, {{0.5, 2.0}, 0.5}}}}}) {
    const auto r = check_kernel_identity(build(spec), IdentityFixture::lamperti, 1e-10);
    o.require(r.passed, family_name(spec));
    identity = std::max(identity, r.max_residual());
  }
  const auto rot = check_kernel_identity(build(RotatingAverage{1.5, 0.8, kCos}), IdentityFixture::rotating_average, 1e-10);
  o.require(rot.passed, "rotating_average");
  o.detail << "round trip " << round_trip << " (< 1e-12), Lamperti kernel identity " << identity
           << ", rotating identity " << rot.max_residual() << " (< 1e-10)";
  o.require(round_trip < 1e-12, "round trip");
}

// 9. Flow and cocycle algebra.
void flows(Outcome& o) {
  const Philox4x32 rng(9);
  double worst = 0.0;
  bool cocycles = true;
  for (const Flow& flow : {Flow::translation(), Flow::rotation(), Flow::scaling(-1.5), Flow::log_translation(-0.4)}) {
    std::vector<Point> points(1000);
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto u = rng.uniform_pair(0, i);
      points[i].s = flow.kind() == FlowKind::translation       ? -10.0 + 20.0 * u[0]
                    : flow.kind() == FlowKind::log_translation ? std::exp(-4.0 + 8.0 * u[0])
                                                               : 2.0 * kPi * u[0];
      points[i].x = std::exp(-4.0 + 8.0 * u[1]);
      if (i < 10) {
        const auto v = rng.uniform_pair(1, i);
        pairs.emplace_back(-3.0 + 6.0 * v[0], -3.0 + 6.0 * v[1]);
      }
    }
    const auto r = check_flow_laws(flow, pairs, points);
    worst = std::max({worst, r.group_residual, r.identity_residual, r.chain_residual});
    o.require(r.passed(1e-10), flow.name());
    const auto b = [](const Point& p) { return std::cos(2.0 * p.s) + std::sin(p.x) >= 0.0 ? 1 : -1; };
    cocycles = cocycles && check_cocycle(constant_cocycle(), flow, pairs, points).passed() &&
               check_cocycle(coboundary(b, flow), flow, pairs, points).passed();
  }
  o.detail << "max flow-law residual " << worst << " (< 1e-10) on 1000 points x 10 time pairs x 4 flows, cocycles "
           << (cocycles ? "exact" : "FAILED");
  o.require(cocycles, "cocycles");
}

// 10. Riemann integration of curves.
void riemann_curves(Outcome& o) {
  const Curve exp_curve = [](double t) { return Element{std::exp(t)}; };
  const Curve zero = [](double) { return Element{0.0}; };
  const Curve ramp = [](double t) { return Element{t}; };
  const double tol = 1e-8;
  const double r1 = check_fubini(exp_curve, Multiplier::constant(1.0), 0.0, 1.0, tol).residual;
  const double r2 = check_fubini(zero, Multiplier::constant(1.0), 0.0, 1.0, tol).residual;
  const auto third = check_fubini(ramp, Multiplier::step({0.0, 1.0}, {0.0, 1.0, 0.0}), 0.0, 1.0, tol);
  const double fubini = std::max({r1, r2, third.residual, std::abs(third.lhs[0] - 1.0 / 6.0)});
  o.require(fubini < 1e-6, "fubini");

  const Curve tri = [](double t) {
    return Element{t < 1.0 / 3 ? 3.0 * t : t < 2.0 / 3 ? 1.0 - 4.5 * (t - 1.0 / 3) : -0.5 + 1.5 * (t - 2.0 / 3)};
  };
  double semivar = 0.0;
  for (double delta : {0.1, 0.01, 0.001}) {
    semivar = std::max(semivar, std::abs(semivariation(ramp, 0.0, 1.0, delta).value - delta));
    semivar = std::max(semivar, std::abs(semivariation(tri, 0.0, 1.0, delta).value - 3.0 * delta));
  }
  o.require(semivar < 1e-6, "semivariation");

  const Curve wiggle = [](double t) { return Element{std::sin(7.0 * t) + 0.3 * t}; };
  bool homogeneous = true;
  const double base = semivariation(wiggle, 0.0, 2.0, 0.01).value;
  for (double lambda : {0.125, 0.5, 2.0, 8.0})
    homogeneous = homogeneous && semivariation(wiggle, 0.0, 2.0, 0.01 * lambda).value == lambda * base;
  o.require(homogeneous, "homogeneity");
  o.detail << "Fubini residual " << fubini << " (< 1e-6), |A - delta TV| " << semivar
           << " (< 1e-6), homogeneity " << (homogeneous ? "exact" : "NOT exact");
}

// 11. Identifiability.
void identifiability(Outcome& o) {
  const double alpha = 1.5;
  const auto probes = default_probes();
  double cf_gap = 0.0;
  auto compare = [&](const MixedLfsm& q1, const MixedLfsm& q2, double scale) {
    const Kernel k1 = build(q1), k2 = build(q2);
    for (const auto& p : probes) {
      const double a = scale * cf_exponent_value(k1, p), b = cf_exponent_value(k2, p);
      cf_gap = std::max(cf_gap, std::abs(b - a) / std::abs(a));
    }
  };
  const MixedLfsm q1{alpha, 0.7, {{{2.0, 0.0}, 1.0}}};
  const MixedLfsm q2{alpha, 0.7, {{{1.0, 0.0}, std::pow(2.0, alpha)}}};
  const MixedLfsm q3{alpha, 0.7, {{{1.0, 0.0}, 1.0}}};
  const MixedLfsm q4{alpha, 0.7, {{{-1.0, 0.0}, 1.0}}};
  const MixedLfsm q5{alpha, 0.7, {{{0.0, 1.0}, 1.0}}};
  o.require(same_mixed_lfsm(q1, q2) && same_mixed_lfsm(q3, q4) && !same_mixed_lfsm(q3, q5), "same_mixed_lfsm");
  compare(q1, q2, 1.0);
  compare(q3, q4, 1.0);
  // Ray-concentrated mixture against the pure LFSM on that ray.
  const MixedLfsm ray{alpha, 0.7, {{{1.0, 0.0}, 1.0}, {{-2.0, 0.0}, 0.5}}};
  compare(q3, ray, 1.0 + 0.5 * std::pow(2.0, alpha));
  o.require(cf_gap < 1e-3, "cf agreement");

  const bool rays = ray_test(std::vector<MixingAtom>{{{1.0, 0.0}, 1.0}, {{2.0, 0.0}, 1.0}}) &&
                    ray_test(std::vector<MixingAtom>{{{1.0, 0.0}, 1.0}, {{-2.0, 0.0}, 1.0}}) &&
                    !ray_test(std::vector<MixingAtom>{{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}});
  o.require(rays, "ray_test");

  double witness_err = 0.0;
  const FourierSeries shifted{1.0, {{1, std::cos(kPi / 3.0), -std::sin(kPi / 3.0)}}};
  const auto w1 = match_rotating(kCos, 0.8, shifted, 0.8);
  const auto w2 = match_rotating(kCos, 0.8, FourierSeries{0.0, {{1, -1.0, 0.0}}}, 0.8);
  o.require(w1 && w2, "constructed pairs matched");
  if (w1 && w2) {
    witness_err = std::max({std::abs(w1->shift - kPi / 3.0), std::abs(w1->constant - 1.0), std::abs(w2->shift),
                            std::abs(w2->constant)});
    o.require(w1->epsilon == 1 && w2->epsilon == -1, "epsilon");
  }
  o.require(witness_err < 1e-3, "witness accuracy");
  const bool rejected = !match_rotating(kCos, 0.8, FourierSeries{0.0, {{1, 1.0, 0.0}, {2, 0.5, 0.0}}}, 0.8);
  o.require(rejected, "non-match rejected");
  o.detail << "cf rtol " << cf_gap << " (< 1e-3) on 8 probes x 3 pairs, ray tests " << (rays ? "ok" : "WRONG")
           << ", witness error " << witness_err << " (< 1e-3), non-match " << (rejected ? "rejected" : "ACCEPTED");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"sampler law", sampler_law},
      {"simulator vs cf oracle", simulator_oracle},
      {"stationary increments", stationary_increments},
      {"self-similarity exponent", self_similarity},
      {"region map", region},
      {"Hopf classification", hopf},
      {"Masani round trip", masani},
      {"Lamperti round trip and kernel identities", lamperti},
      {"flow and cocycle algebra", flows},
      {"Riemann integration of curves", riemann_curves},
      {"identifiability", identifiability},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
