#include "sssi/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "sssi/errors.hpp"

namespace sssi {

namespace {

double parse_double(std::string_view field, const char* what) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParameterError(std::string(what) + ": cannot read '" + std::string(field) + "' as a number");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<double> parse_range(std::string_view text, bool geometric) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ParameterError("range '" + std::string(text) + "' must read lo:hi:n");
  const double lo = parse_double(parts[0], "range");
  const double hi = parse_double(parts[1], "range");
  const double count = parse_double(parts[2], "range");
  if (!(count >= 1.0) || count != std::floor(count)) throw ParameterError("range count n must be a positive integer");
  const auto n = static_cast<std::size_t>(count);
  if (n > 1 && !(hi > lo)) throw ParameterError("range needs lo < hi when n > 1");
  if (geometric && !(lo > 0.0)) throw ParameterError("a geometric range needs lo > 0");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = geometric ? std::exp(std::log(lo) + w * (std::log(hi) - std::log(lo))) : lo + w * (hi - lo);
  }
  out.back() = n == 1 ? lo : hi;
  return out;
}

void write_ensemble_csv(std::ostream& out, const PathEnsemble& ensemble) {
  std::string line = "time";
  for (std::size_t p = 0; p < ensemble.n_paths; ++p) line += ",path_" + std::to_string(p);
  out << line << '\n';
  for (std::size_t i = 0; i < ensemble.times.size(); ++i) {
    line = format_double(ensemble.times[i]);
    for (std::size_t p = 0; p < ensemble.n_paths; ++p) {
      line += ',';
      line += format_double(ensemble.at(p, i));
    }
    out << line << '\n';
  }
}

PathEnsemble read_ensemble_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("ensemble CSV is empty");
  const auto header = split(line, ',');
  if (header.empty() || header[0] != "time") throw ParameterError("ensemble CSV header must start with 'time'");
  PathEnsemble e;
  e.n_paths = header.size() - 1;
  for (std::size_t p = 0; p < e.n_paths; ++p)
    if (header[p + 1] != "path_" + std::to_string(p))
      throw ParameterError("ensemble CSV column " + std::to_string(p + 1) + " must be path_" + std::to_string(p));
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size())
      throw ParameterError("ensemble CSV row " + std::to_string(rows.size() + 1) + " has the wrong number of fields");
    e.times.push_back(parse_double(fields[0], "ensemble CSV"));
    std::vector<double> row(e.n_paths);
    for (std::size_t p = 0; p < e.n_paths; ++p) row[p] = parse_double(fields[p + 1], "ensemble CSV");
    rows.push_back(std::move(row));
  }
  e.values.resize(e.n_paths * e.times.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t p = 0; p < e.n_paths; ++p) e.values[p * e.times.size() + i] = rows[i][p];
  return e;
}

nlohmann::json ensemble_metadata(const PathEnsemble& ensemble, const nlohmann::json& spec,
                                 const nlohmann::json& grid) {
  return {{"schema_version", kSchemaVersion},
          {"seed", ensemble.seed},
          {"n_paths", ensemble.n_paths},
          {"n_times", ensemble.times.size()},
          {"spec", spec},
          {"grid", grid},
          {"digest", ensemble.spec_digest}};
}

void write_region_csv(std::ostream& out, const RegionMap& map) {
  out << "a,b,verdict,value\n";
  for (const auto& p : map.points)
    out << format_double(p.a) << ',' << format_double(p.b) << ',' << quad::to_string(p.verdict) << ','
        << format_double(p.value) << '\n';
}

nlohmann::json to_json(const LinearCombo& combo) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : combo.terms) terms.push_back({{"theta", t.theta}, {"t", t.t}});
  return terms;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : report.probes) probes.push_back(to_json(p));
  nlohmann::json doc{{"check", report.check},
                     {"passed", report.passed},
                     {"tolerance", report.tolerance},
                     {"max_residual", report.max_residual()},
                     {"residuals", report.residuals},
                     {"refinement_trace", report.refinement_trace},
                     {"verdict", quad::to_string(report.verdict)},
                     {"probes", probes}};
  if (report.fitted_hurst) doc["fitted_hurst"] = *report.fitted_hurst;
  if (report.expected_hurst) doc["expected_hurst"] = *report.expected_hurst;
  if (!report.message.empty()) doc["message"] = report.message;
  return doc;
}

nlohmann::json to_json(const HopfPoint& point) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : point.trace) trace.push_back({s.window, s.value});
  return {{"point", {{"atom", point.point.atom}, {"x", point.point.x}, {"s", point.point.s}}},
          {"verdict", to_string(point.verdict)},
          {"trace", trace}};
}

}  // namespace sssi
