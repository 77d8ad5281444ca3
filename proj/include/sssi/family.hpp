#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sssi {

/// One atom of a finite mixing measure on R^2.
struct MixingAtom {
  std::array<double, 2> b{0.0, 0.0};
  double weight = 1.0;
};

/// A finite Fourier series g(s) = constant + sum_k (cos_k cos(ks) + sin_k sin(ks)).
struct FourierSeries {
  struct Harmonic {
    int k = 1;
    double cos = 0.0;
    double sin = 0.0;
  };
  double constant = 0.0;
  std::vector<Harmonic> harmonics;

  double operator()(double s) const;
  /// Largest k with a nonzero coefficient (0 for a constant series).
  int max_harmonic() const;
  /// Harmonic indices carrying a nonzero coefficient, ascending, merged.
  std::vector<int> active_harmonics() const;
};

struct LinearMotion {
  double alpha = 1.5;
  double b1 = 1.0;
  double b2 = 0.0;
};

struct Lfsm {
  double alpha = 1.5;
  double hurst = 0.7;
  double b1 = 1.0;
  double b2 = 0.0;
};

struct LogFractional {
  double alpha = 1.5;
  double c = 1.0;
};

struct MixedLfsm {
  double alpha = 1.5;
  double hurst = 0.7;
  std::vector<MixingAtom> atoms;
};

struct TruncatedFractional {
  double alpha = 1.5;
  double a = 0.5;
  double b = 0.5;
};

struct Chentsov {
  double alpha = 1.25;
  double beta = 0.5;
};

struct RotatingAverage {
  double alpha = 1.5;
  double beta = 0.8;
  FourierSeries g;
};

using FamilySpec =
    std::variant<Lfsm, LinearMotion, LogFractional, MixedLfsm, TruncatedFractional, Chentsov, RotatingAverage>;

double alpha_of(const FamilySpec& spec);
/// Snake-case family tag used in JSON documents and reports.
std::string family_name(const FamilySpec& spec);

struct Admissibility {
  bool ok = false;
  /// Human-readable statement of the first violated condition.
  std::string violated;
  std::optional<double> hurst;
};

Admissibility validate(const FamilySpec& spec);

/// Self-similarity exponent; throws ParameterError for inadmissible specs.
double hurst_of(const FamilySpec& spec);

/// Throws ParameterError carrying the violated condition unless admissible.
void require_admissible(const FamilySpec& spec);

/// Closed-form well-posedness region of the truncated family.
/// Upper branch: max(0, alpha a - alpha + 1) < b < alpha a.
bool truncated_region_upper(double alpha, double a, double b);
/// Lower branch: max(alpha a, alpha a - alpha + 1) < b < min(0, alpha a + 1);
/// the middle bound only binds for alpha <= 1.
bool truncated_region_lower(double alpha, double a, double b);
bool truncated_admissible(double alpha, double a, double b);

nlohmann::json to_json(const FamilySpec& spec);
/// Throws ParameterError on malformed documents.
FamilySpec family_from_json(const nlohmann::json& doc);

}  // namespace sssi
