// sssi: simulate, verify, classify, region, identify and transform.
//
// Exit codes: 0 pass, 1 verification failure, 2 invalid input, 3 I/O.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sssi/errors.hpp"
#include "sssi/family.hpp"
#include "sssi/flows.hpp"
#include "sssi/identifiability.hpp"
#include "sssi/io.hpp"
#include "sssi/region.hpp"
#include "sssi/rng.hpp"
#include "sssi/stable_core.hpp"
#include "sssi/transforms.hpp"
#include "sssi/verify.hpp"

namespace {

using nlohmann::json;
using namespace sssi;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInvalid = 2;
constexpr int kIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SSSI_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ParameterError("SSSI_SEED must be a nonnegative integer");
    return v;
  }
  return 1;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError(path + ": " + e.what());
  }
}

FamilySpec read_spec(const std::string& path) { return family_from_json(read_json(path)); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void emit(const json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed on " + path);
}

std::string sidecar_path(const std::string& out, const std::string& meta) {
  if (!meta.empty()) return meta;
  const auto dot = out.rfind('.');
  const auto slash = out.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".json";
  return out + ".json";
}

// ---- simulate ----

struct SimulateArgs {
  std::string spec, out, meta, grid = "0:1:256";
  bool geometric = false;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, unsigned threads) {
  const json doc = read_json(a.spec);
  const FamilySpec spec = family_from_json(doc);
  const Kernel kernel = build(spec);
  const auto times = parse_range(a.grid, a.geometric);
  if (a.n_paths == 0) throw ParameterError("--n-paths must be positive");
  SimulationOptions opts;
  opts.threads = threads;
  const PathEnsemble e = simulate(kernel, times, a.n_paths, a.seed, opts);
  auto out = open_out(a.out);
  write_ensemble_csv(out, e);
  if (!out) throw IoError("write failed on " + a.out);
  const json grid{{"range", a.grid}, {"geometric", a.geometric}, {"n", times.size()}};
  emit(ensemble_metadata(e, to_json(spec), grid), sidecar_path(a.out, a.meta));
  return kPass;
}

// ---- verify ----

struct VerifyArgs {
  std::string spec, out, checks = "si,ss";
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  double si_tol = 1e-3, ss_tol = 0.01, scaling_tol = 1e-12, identity_tol = 1e-10, mc_allowance = 0.02;
  int refinement = 0;
  std::optional<double> expect_hurst;
};

std::set<std::string> parse_checks(const std::string& text) {
  static const std::set<std::string> known{"si", "ss", "scaling", "mc", "kernel-identity"};
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!known.count(item)) throw ParameterError("unknown check '" + item + "'; expected si, ss, scaling, mc, kernel-identity");
    out.insert(item);
  }
  if (out.empty()) throw ParameterError("--checks selects no check");
  return out;
}

int cmd_verify(const VerifyArgs& a, unsigned threads) {
  const FamilySpec spec = read_spec(a.spec);
  const Kernel kernel = build(spec);
  const auto checks = parse_checks(a.checks);
  const auto probes = default_probes();
  QuadraturePolicy policy;
  policy.refinement = a.refinement;

  std::vector<VerificationReport> reports;
  if (checks.count("si")) {
    const std::vector<double> shifts{0.5, 1.0, 2.0, 5.0};
    reports.push_back(check_stationary_increments(kernel, probes, shifts, a.si_tol, policy));
  }
  if (checks.count("ss")) {
    const std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
    reports.push_back(check_self_similar(kernel, probes, scales, a.ss_tol, policy, a.expect_hurst));
  }
  if (checks.count("scaling")) {
    const std::vector<double> scales{0.25, 0.5, 2.0, 4.0};
    reports.push_back(check_scaling_maps(spec, scales, a.scaling_tol));
  }
  if (checks.count("kernel-identity")) {
    const auto fixture = std::holds_alternative<RotatingAverage>(spec) ? IdentityFixture::rotating_average
                                                                       : IdentityFixture::lamperti;
    reports.push_back(check_kernel_identity(kernel, fixture, a.identity_tol));
  }
  if (checks.count("mc")) {
    std::set<double> grid;
    for (const auto& p : probes)
      for (double t : p.times()) grid.insert(t);
    const std::vector<double> times(grid.begin(), grid.end());
    SimulationOptions opts;
    opts.threads = threads;
    const PathEnsemble e = simulate(kernel, times, a.n_paths, a.seed, opts);
    reports.push_back(mc_distribution_check(e, kernel, probes, mc_tolerance(a.n_paths, a.mc_allowance), policy));
  }

  bool all = true;
  json doc{{"schema_version", kSchemaVersion}, {"spec", to_json(spec)}, {"checks", json::array()}};
  std::cerr << std::left << std::setw(26) << "check" << std::setw(6) << "pass" << std::setw(14) << "max_residual"
            << "tolerance\n";
  for (const auto& r : reports) {
    all = all && r.passed;
    doc["checks"].push_back(to_json(r));
    std::cerr << std::left << std::setw(26) << r.check << std::setw(6) << (r.passed ? "yes" : "NO") << std::setw(14)
              << r.max_residual() << r.tolerance;
    if (r.fitted_hurst) std::cerr << "  H " << *r.fitted_hurst;
    std::cerr << '\n';
    if (!r.passed) std::cerr << "failed: " << r.check << (r.message.empty() ? "" : ": " + r.message) << '\n';
  }
  doc["passed"] = all;
  emit(doc, a.out);
  return all ? kPass : kFail;
}

// ---- classify ----

struct ClassifyArgs {
  std::string family, spec, out;
  std::size_t points = 100;
  std::uint64_t seed = 0;
  double alpha = 1.5;
};

int cmd_classify(const ClassifyArgs& a, unsigned threads) {
  std::optional<FamilySpec> spec;
  if (!a.spec.empty()) spec = read_spec(a.spec);
  const double alpha = spec ? alpha_of(*spec) : a.alpha;
  const Philox4x32 rng(a.seed);
  std::vector<Point> pts(a.points);
  std::function<double(const Point&)> g0;
  std::optional<Flow> flow;

  if (a.family == "moving-average") {
    flow = Flow::translation();
    std::size_t atoms = 1;
    if (spec) {
      if (std::holds_alternative<RotatingAverage>(*spec) || std::holds_alternative<TruncatedFractional>(*spec) ||
          std::holds_alternative<Chentsov>(*spec))
        throw ParameterError("moving-average classification needs a moving-average family spec");
      if (const auto* m = std::get_if<MixedLfsm>(&*spec)) atoms = m->atoms.size();
      auto k = std::make_shared<Kernel>(build(*spec));
      g0 = [k](const Point& p) { return (*k)(1.0, p); };
    } else {
      g0 = [](const Point& p) { return p.s >= 0.0 && p.s <= 1.0 ? 1.0 : 0.0; };
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto u = rng.uniform_pair(0, i);
      pts[i].s = -5.0 + 10.0 * u[0];
      pts[i].atom = std::min(atoms - 1, static_cast<std::size_t>(u[1] * static_cast<double>(atoms)));
    }
  } else if (a.family == "rotating") {
    flow = Flow::rotation();
    FourierSeries g;
    g.harmonics = {{1, 1.0, 0.0}};
    if (spec) {
      const auto* r = std::get_if<RotatingAverage>(&*spec);
      if (r == nullptr) throw ParameterError("rotating classification needs a rotating_average spec");
      g = r->g;
    }
    g0 = [g](const Point& p) { return g(p.s); };
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto u = rng.uniform_pair(0, i);
      pts[i].s = 2.0 * std::numbers::pi * u[0];
      pts[i].x = std::exp(std::log(0.1) + u[1] * std::log(100.0));
    }
  } else {
    throw ParameterError("--family must be moving-average or rotating");
  }

  const auto result = hopf_classify(*flow, g0, alpha, pts, {}, threads);
  json counts{{"dissipative", 0}, {"conservative", 0}, {"undecided", 0}, {"degenerate", 0}};
  json points = json::array();
  for (const auto& p : result) {
    counts[std::string(to_string(p.verdict))] = counts[std::string(to_string(p.verdict))].get<int>() + 1;
    points.push_back(to_json(p));
  }
  const int dis = counts["dissipative"].get<int>(), con = counts["conservative"].get<int>();
  const std::string overall = dis > 0 && con == 0 ? "dissipative" : con > 0 && dis == 0 ? "conservative"
                              : dis > 0 && con > 0 ? "mixed" : "undecided";
  json doc{{"schema_version", kSchemaVersion}, {"flow", flow->name()}, {"alpha", alpha},
           {"verdict", overall},           {"counts", counts},       {"points", points}};
  emit(doc, a.out);
  std::cerr << overall << '\n';
  return kPass;
}

// ---- region ----

struct RegionArgs {
  double alpha = 1.5, margin = 0.05;
  std::string a_range = "-1:1:21", b_range = "-1:1:21", out, summary;
};

int cmd_region(const RegionArgs& a, unsigned threads) {
  const auto as = parse_range(a.a_range);
  const auto bs = parse_range(a.b_range);
  const RegionMap map = region_map(a.alpha, as, bs, region_policy(), a.margin, threads);
  if (a.out.empty() || a.out == "-") {
    write_region_csv(std::cout, map);
  } else {
    auto out = open_out(a.out);
    write_region_csv(out, map);
    if (!out) throw IoError("write failed on " + a.out);
  }
  json doc{{"schema_version", kSchemaVersion}, {"alpha", a.alpha},       {"margin", a.margin},
           {"scored", map.scored()},           {"agreeing", map.agreeing()}, {"agreement", map.agreement()}};
  if (!a.summary.empty()) emit(doc, a.summary);
  std::cerr << "agreement " << map.agreeing() << "/" << map.scored() << '\n';
  return map.agreeing() == map.scored() ? kPass : kFail;
}

// ---- identify ----

struct IdentifyArgs {
  std::string spec1, spec2, out;
  double tol = 1e-9;
};

std::optional<MixedLfsm> as_mixed(const FamilySpec& s) {
  if (const auto* m = std::get_if<MixedLfsm>(&s)) return *m;
  if (const auto* l = std::get_if<Lfsm>(&s)) return MixedLfsm{l->alpha, l->hurst, {{{l->b1, l->b2}, 1.0}}};
  return std::nullopt;
}

int cmd_identify(const IdentifyArgs& a) {
  const FamilySpec s1 = read_spec(a.spec1), s2 = read_spec(a.spec2);
  require_admissible(s1);
  require_admissible(s2);
  json doc{{"schema_version", kSchemaVersion}};
  const auto m1 = as_mixed(s1), m2 = as_mixed(s2);
  if (m1 && m2) {
    const bool equal = same_mixed_lfsm(*m1, *m2, a.tol);
    doc["verdict"] = equal ? "equal" : "distinct";
    doc["measure1"] = to_json(mixing_measure(m1->atoms, m1->alpha));
    doc["measure2"] = to_json(mixing_measure(m2->atoms, m2->alpha));
    doc["ray1"] = ray_test(m1->atoms);
    doc["ray2"] = ray_test(m2->atoms);
  } else if (std::holds_alternative<RotatingAverage>(s1) && std::holds_alternative<RotatingAverage>(s2)) {
    const auto& r1 = std::get<RotatingAverage>(s1);
    const auto& r2 = std::get<RotatingAverage>(s2);
    if (r1.alpha != r2.alpha) {
      doc["verdict"] = "distinct";
    } else {
      const auto w = match_rotating(r1.g, r1.beta, r2.g, r2.beta);
      doc["verdict"] = w ? "equal" : "distinct";
      if (w) doc["witness"] = to_json(*w);
    }
  } else {
    throw ParameterError("identify compares two lfsm/mixed_lfsm specs or two rotating_average specs");
  }
  emit(doc, a.out);
  std::cerr << doc["verdict"].get<std::string>() << '\n';
  return kPass;
}

// ---- transform ----

struct TransformArgs {
  std::string in, out, meta, op;
  double hurst = 0.5, history = 20.0;
};

int cmd_transform(const TransformArgs& a, unsigned threads) {
  std::ifstream in(a.in);
  if (!in) throw IoError("cannot open " + a.in);
  const PathEnsemble src = read_ensemble_csv(in);
  std::function<PathFunction(const PathFunction&)> fn;
  if (a.op == "masani") fn = [&](const PathFunction& x) { return masani_forward(x, a.history).y; };
  else if (a.op == "masani-inverse") fn = [](const PathFunction& y) { return masani_inverse(y); };
  else if (a.op == "lamperti") fn = [&](const PathFunction& x) { return lamperti_to_stationary(x, a.hurst); };
  else if (a.op == "lamperti-inverse") fn = [&](const PathFunction& y) { return lamperti_from_stationary(y, a.hurst); };
  else throw ParameterError("--op must be masani, masani-inverse, lamperti or lamperti-inverse");
  const PathEnsemble e = transform_paths(src, fn, threads);
  auto out = open_out(a.out);
  write_ensemble_csv(out, e);
  if (!out) throw IoError("write failed on " + a.out);
  json doc{{"schema_version", kSchemaVersion}, {"op", a.op}, {"source", a.in},
           {"n_paths", e.n_paths},             {"n_times", e.times.size()}};
  if (a.op.starts_with("lamperti")) doc["hurst"] = a.hurst;
  if (a.op == "masani") doc["history"] = a.history;
  emit(doc, sidecar_path(a.out, a.meta));
  return kPass;
}

constexpr const char* kFooter = R"(CSV columns:
  ensembles: time,path_0,...,path_{n-1}; one row per grid time
  region:    a,b,verdict,value; verdict is finite, divergent or undecided
Sidecar and report JSON carry schema_version. Seeds default to $SSSI_SEED, else 1.
Exit codes: 0 pass, 1 verification failure, 2 invalid input, 3 I/O.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and verify symmetric alpha-stable self-similar processes"};
  app.footer(kFooter);
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { seed = v; seed_given = true; },
                                            "Random seed (default $SSSI_SEED, else 1)");
  };

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate an ensemble to CSV plus a JSON sidecar");
  simulate_cmd->add_option("--spec", sim.spec, "Family spec JSON")->required();
  simulate_cmd->add_option("--n-paths", sim.n_paths, "Number of paths");
  simulate_cmd->add_option("--t", sim.grid, "Time grid lo:hi:n");
  simulate_cmd->add_flag("--geometric", sim.geometric, "Space the grid geometrically");
  simulate_cmd->add_option("--out", sim.out, "Ensemble CSV")->required();
  simulate_cmd->add_option("--meta", sim.meta, "Sidecar JSON (default: CSV path with .json)");
  add_seed(simulate_cmd);

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Run verification checks; exit 0 iff all pass");
  verify_cmd->add_option("--spec", ver.spec, "Family spec JSON")->required();
  verify_cmd->add_option("--checks", ver.checks, "Comma list of si, ss, scaling, mc, kernel-identity");
  verify_cmd->add_option("--n-paths", ver.n_paths, "Paths for the mc check");
  verify_cmd->add_option("--si-tol", ver.si_tol);
  verify_cmd->add_option("--ss-tol", ver.ss_tol);
  verify_cmd->add_option("--scaling-tol", ver.scaling_tol);
  verify_cmd->add_option("--identity-tol", ver.identity_tol);
  verify_cmd->add_option("--mc-allowance", ver.mc_allowance, "Added to 3/sqrt(n) for the mc tolerance");
  verify_cmd->add_option("--refinement", ver.refinement, "Quadrature refinement level");
  verify_cmd->add_option("--expect-hurst", ver.expect_hurst, "Compare the ss fit against this H");
  verify_cmd->add_option("--out", ver.out, "Report JSON (default stdout)");
  add_seed(verify_cmd);

  ClassifyArgs cls;
  auto* classify_cmd = app.add_subcommand("classify", "Hopf classification of sampled points");
  classify_cmd->add_option("--family", cls.family, "moving-average (translation flow) or rotating")->required();
  classify_cmd->add_option("--spec", cls.spec, "Optional spec supplying g0 and alpha");
  classify_cmd->add_option("--alpha", cls.alpha, "alpha when no spec is given");
  classify_cmd->add_option("--points", cls.points, "Number of sampled points");
  classify_cmd->add_option("--out", cls.out, "Verdict JSON (default stdout)");
  add_seed(classify_cmd);

  RegionArgs reg;
  auto* region_cmd = app.add_subcommand("region", "Map convergence of I(a, b) over a grid");
  region_cmd->add_option("--alpha", reg.alpha);
  region_cmd->add_option("--a", reg.a_range, "a grid lo:hi:n");
  region_cmd->add_option("--b", reg.b_range, "b grid lo:hi:n");
  region_cmd->add_option("--margin", reg.margin, "Boundary margin of scored points");
  region_cmd->add_option("--out", reg.out, "Region CSV (default stdout)");
  region_cmd->add_option("--summary", reg.summary, "Agreement summary JSON");

  IdentifyArgs idf;
  auto* identify_cmd = app.add_subcommand("identify", "Decide whether two specs give the same law");
  identify_cmd->add_option("--spec1", idf.spec1)->required();
  identify_cmd->add_option("--spec2", idf.spec2)->required();
  identify_cmd->add_option("--tol", idf.tol, "Atom matching tolerance");
  identify_cmd->add_option("--out", idf.out, "Verdict JSON (default stdout)");

  TransformArgs tr;
  auto* transform_cmd = app.add_subcommand("transform", "Apply a path transform to an ensemble CSV");
  transform_cmd->add_option("--in", tr.in, "Input ensemble CSV")->required();
  transform_cmd->add_option("--op", tr.op, "masani, masani-inverse, lamperti or lamperti-inverse")->required();
  transform_cmd->add_option("--hurst", tr.hurst, "H for the Lamperti transforms");
  transform_cmd->add_option("--history", tr.history, "History length L for masani");
  transform_cmd->add_option("--out", tr.out, "Output ensemble CSV")->required();
  transform_cmd->add_option("--meta", tr.meta, "Sidecar JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInvalid;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (*simulate_cmd) {
      sim.seed = seed;
      return cmd_simulate(sim, threads);
    }
    if (*verify_cmd) {
      ver.seed = seed;
      return cmd_verify(ver, threads);
    }
    if (*classify_cmd) {
      cls.seed = seed;
      return cmd_classify(cls, threads);
    }
    if (*region_cmd) return cmd_region(reg, threads);
    if (*identify_cmd) return cmd_identify(idf);
    if (*transform_cmd) return cmd_transform(tr, threads);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kInvalid;
}
