#include "sssi/family.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "sssi/errors.hpp"

namespace sssi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Admissibility fail(std::string why) { return {false, std::move(why), std::nullopt}; }
Admissibility pass(double h) { return {true, {}, h}; }

std::optional<std::string> check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) return "alpha must lie in (0, 2], got " + fmt(alpha);
  return std::nullopt;
}

std::optional<std::string> check_fractional_hurst(double alpha, double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) return "hurst must satisfy 0 < H < 1, got " + fmt(hurst);
  if (std::abs(hurst - 1.0 / alpha) < 1e-12)
    return "hurst = 1/alpha makes the fractional kernel degenerate; use linear_motion or log_fractional";
  return std::nullopt;
}

Admissibility validate_one(const Lfsm& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (auto e = check_fractional_hurst(s.alpha, s.hurst)) return fail(*e);
  if (s.b1 == 0.0 && s.b2 == 0.0) return fail("lfsm requires (b1, b2) != (0, 0)");
  if (!std::isfinite(s.b1) || !std::isfinite(s.b2)) return fail("lfsm coefficients must be finite");
  return pass(s.hurst);
}

Admissibility validate_one(const LinearMotion& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (s.b1 == s.b2) return fail("linear_motion requires b1 != b2 (otherwise the kernel vanishes)");
  if (!std::isfinite(s.b1) || !std::isfinite(s.b2)) return fail("linear_motion coefficients must be finite");
  return pass(1.0 / s.alpha);
}

Admissibility validate_one(const LogFractional& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (!(s.alpha > 1.0)) return fail("log_fractional requires 1 < alpha <= 2, got alpha = " + fmt(s.alpha));
  if (s.c == 0.0 || !std::isfinite(s.c)) return fail("log_fractional requires a finite c != 0");
  return pass(1.0 / s.alpha);
}

Admissibility validate_one(const MixedLfsm& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (auto e = check_fractional_hurst(s.alpha, s.hurst)) return fail(*e);
  if (s.atoms.empty()) return fail("mixed_lfsm requires at least one atom");
  bool nonzero = false;
  for (const auto& atom : s.atoms) {
    if (!(atom.weight > 0.0) || !std::isfinite(atom.weight)) return fail("mixed_lfsm atom weights must be positive");
    if (!std::isfinite(atom.b[0]) || !std::isfinite(atom.b[1])) return fail("mixed_lfsm atoms must be finite");
    nonzero = nonzero || atom.b[0] != 0.0 || atom.b[1] != 0.0;
  }
  if (!nonzero) return fail("mixed_lfsm requires at least one atom with b != 0");
  return pass(s.hurst);
}

Admissibility validate_one(const TruncatedFractional& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (s.a == 0.0) return fail("truncated_fractional with a = 0 diverges for every b");
  if (!truncated_admissible(s.alpha, s.a, s.b)) {
    const double aa = s.alpha * s.a;
    std::string why = "truncated_fractional requires max(0, alpha*a - alpha + 1) < b < alpha*a or "
                      "max(alpha*a, alpha*a - alpha + 1) < b < min(0, alpha*a + 1); got alpha*a = " +
                      fmt(aa) + ", b = " + fmt(s.b);
    if (s.a > 0.0 && s.alpha <= 1.0) why += " (no admissible b exists for a > 0 when alpha <= 1)";
    return fail(why);
  }
  return pass((s.alpha * s.a - s.b + 1.0) / s.alpha);
}

Admissibility validate_one(const Chentsov& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (!(s.beta > 0.0 && s.beta < 1.0)) return fail("chentsov requires 0 < beta < 1, got beta = " + fmt(s.beta));
  return pass(s.beta / s.alpha);
}

Admissibility validate_one(const RotatingAverage& s) {
  if (auto e = check_alpha(s.alpha)) return fail(*e);
  if (s.g.max_harmonic() == 0) return fail("rotating_average requires a nonconstant g");
  for (const auto& h : s.g.harmonics)
    if (h.k < 1) return fail("rotating_average harmonic indices must be >= 1");
  // A finite Fourier series is Lipschitz, so its L^alpha modulus is O(t^alpha).
  if (!(s.beta > 0.0 && s.beta < s.alpha))
    return fail("rotating_average requires 0 < beta < alpha (smoothness order of g), got beta = " + fmt(s.beta));
  return pass(s.beta / s.alpha);
}

}  // namespace

double FourierSeries::operator()(double s) const {
  double v = constant;
  for (const auto& h : harmonics) v += h.cos * std::cos(h.k * s) + h.sin * std::sin(h.k * s);
  return v;
}

std::vector<int> FourierSeries::active_harmonics() const {
  std::map<int, std::pair<double, double>> merged;
  for (const auto& h : harmonics) {
    merged[h.k].first += h.cos;
    merged[h.k].second += h.sin;
  }
  std::vector<int> out;
  for (const auto& [k, c] : merged)
    if (k > 0 && (c.first != 0.0 || c.second != 0.0)) out.push_back(k);
  return out;
}

int FourierSeries::max_harmonic() const {
  auto active = active_harmonics();
  return active.empty() ? 0 : active.back();
}

double alpha_of(const FamilySpec& spec) {
  return std::visit([](const auto& s) { return s.alpha; }, spec);
}

std::string family_name(const FamilySpec& spec) {
  return std::visit(Overloaded{[](const Lfsm&) { return std::string("lfsm"); },
                               [](const LinearMotion&) { return std::string("linear_motion"); },
                               [](const LogFractional&) { return std::string("log_fractional"); },
                               [](const MixedLfsm&) { return std::string("mixed_lfsm"); },
                               [](const TruncatedFractional&) { return std::string("truncated_fractional"); },
                               [](const Chentsov&) { return std::string("chentsov"); },
                               [](const RotatingAverage&) { return std::string("rotating_average"); }},
                    spec);
}

bool truncated_region_upper(double alpha, double a, double b) {
  const double aa = alpha * a;
  return std::max(0.0, aa - alpha + 1.0) < b && b < aa;
}

bool truncated_region_lower(double alpha, double a, double b) {
  const double aa = alpha * a;
  // For alpha <= 1 the s-integral beyond the cap adds b > alpha*a - alpha + 1.
  return std::max(aa, aa - alpha + 1.0) < b && b < std::min(0.0, aa + 1.0);
}

bool truncated_admissible(double alpha, double a, double b) {
  return a != 0.0 && (truncated_region_upper(alpha, a, b) || truncated_region_lower(alpha, a, b));
}

Admissibility validate(const FamilySpec& spec) {
  return std::visit([](const auto& s) { return validate_one(s); }, spec);
}

double hurst_of(const FamilySpec& spec) {
  Admissibility r = validate(spec);
  if (!r.ok) throw ParameterError(r.violated);
  return *r.hurst;
}

void require_admissible(const FamilySpec& spec) {
  Admissibility r = validate(spec);
  if (!r.ok) throw ParameterError(r.violated);
}

nlohmann::json to_json(const FamilySpec& spec) {
  using nlohmann::json;
  json doc = std::visit(
      Overloaded{
          [](const Lfsm& s) { return json{{"alpha", s.alpha}, {"hurst", s.hurst}, {"b1", s.b1}, {"b2", s.b2}}; },
          [](const LinearMotion& s) { return json{{"alpha", s.alpha}, {"b1", s.b1}, {"b2", s.b2}}; },
          [](const LogFractional& s) { return json{{"alpha", s.alpha}, {"c", s.c}}; },
          [](const MixedLfsm& s) {
            json atoms = json::array();
            for (const auto& a : s.atoms) atoms.push_back({{"b", {a.b[0], a.b[1]}}, {"weight", a.weight}});
            return json{{"alpha", s.alpha}, {"hurst", s.hurst}, {"atoms", atoms}};
          },
          [](const TruncatedFractional& s) { return json{{"alpha", s.alpha}, {"a", s.a}, {"b", s.b}}; },
          [](const Chentsov& s) { return json{{"alpha", s.alpha}, {"beta", s.beta}}; },
          [](const RotatingAverage& s) {
            json harmonics = json::array();
            for (const auto& h : s.g.harmonics) harmonics.push_back({{"k", h.k}, {"cos", h.cos}, {"sin", h.sin}});
            return json{{"alpha", s.alpha},
                        {"beta", s.beta},
                        {"g", {{"constant", s.g.constant}, {"harmonics", harmonics}}}};
          }},
      spec);
  doc["family"] = family_name(spec);
  return doc;
}

namespace {

double number(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParameterError(std::string("missing key '") + key + "'");
  if (!it->is_number()) throw ParameterError(std::string("key '") + key + "' must be a number");
  return it->get<double>();
}

double number_or(const nlohmann::json& doc, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

}  // namespace

FamilySpec family_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParameterError("family document must be a JSON object");
  auto it = doc.find("family");
  if (it == doc.end() || !it->is_string()) throw ParameterError("missing string key 'family'");
  const std::string name = it->get<std::string>();
  const double alpha = number(doc, "alpha");
  if (name == "lfsm") return Lfsm{alpha, number(doc, "hurst"), number_or(doc, "b1", 1.0), number_or(doc, "b2", 0.0)};
  if (name == "linear_motion") return LinearMotion{alpha, number_or(doc, "b1", 1.0), number_or(doc, "b2", 0.0)};
  if (name == "log_fractional") return LogFractional{alpha, number_or(doc, "c", 1.0)};
  if (name == "mixed_lfsm") {
    MixedLfsm s{alpha, number(doc, "hurst"), {}};
    auto atoms = doc.find("atoms");
    if (atoms == doc.end() || !atoms->is_array()) throw ParameterError("mixed_lfsm requires an 'atoms' array");
    for (const auto& a : *atoms) {
      auto b = a.find("b");
      if (!a.is_object() || b == a.end() || !b->is_array() || b->size() != 2)
        throw ParameterError("each atom needs 'b': [b1, b2]");
      s.atoms.push_back({{(*b)[0].get<double>(), (*b)[1].get<double>()}, number_or(a, "weight", 1.0)});
    }
    return s;
  }
  if (name == "truncated_fractional") return TruncatedFractional{alpha, number(doc, "a"), number(doc, "b")};
  if (name == "chentsov") return Chentsov{alpha, number(doc, "beta")};
  if (name == "rotating_average") {
    RotatingAverage s{alpha, number(doc, "beta"), {}};
    auto g = doc.find("g");
    if (g == doc.end() || !g->is_object()) throw ParameterError("rotating_average requires a 'g' object");
    s.g.constant = number_or(*g, "constant", 0.0);
    if (auto h = g->find("harmonics"); h != g->end()) {
      if (!h->is_array()) throw ParameterError("'harmonics' must be an array");
      for (const auto& item : *h) {
        if (!item.is_object() || !item.contains("k") || !item["k"].is_number_integer())
          throw ParameterError("each harmonic needs an integer 'k'");
        s.g.harmonics.push_back({item["k"].get<int>(), number_or(item, "cos", 0.0), number_or(item, "sin", 0.0)});
      }
    }
    return s;
  }
  throw ParameterError("unknown family '" + name + "'");
}

}  // namespace sssi
