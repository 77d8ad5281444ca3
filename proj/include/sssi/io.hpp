#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sssi/flows.hpp"
#include "sssi/region.hpp"
#include "sssi/stable_core.hpp"
#include "sssi/transforms.hpp"
#include "sssi/verify.hpp"

namespace sssi {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// "lo:hi:n" -> n equally spaced points from lo to hi inclusive. With
/// `geometric`, the points are equally spaced in log and lo must be positive.
std::vector<double> parse_range(std::string_view text, bool geometric = false);

/// Header `time,path_0,...,path_{n-1}`, one row per grid time.
void write_ensemble_csv(std::ostream& out, const PathEnsemble& ensemble);
/// Reads the format written by write_ensemble_csv. Throws ParameterError on
/// malformed input.
PathEnsemble read_ensemble_csv(std::istream& in);

/// Sidecar with schema_version, seed, n_paths, spec, grid and digest.
nlohmann::json ensemble_metadata(const PathEnsemble& ensemble, const nlohmann::json& spec,
                                 const nlohmann::json& grid);

/// Header `a,b,verdict,value`.
void write_region_csv(std::ostream& out, const RegionMap& map);

nlohmann::json to_json(const LinearCombo& combo);
nlohmann::json to_json(const VerificationReport& report);
/// {point, verdict, trace: [[L, value], ...]}
nlohmann::json to_json(const HopfPoint& point);

}  // namespace sssi
