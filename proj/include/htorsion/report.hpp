#pragma once

// Input documents and reports for the command-line tool.
//
// Input (JSON), exactly one of:
//   {"n": 3, "C": [{"up": 3, "lo": [1, 2], "re": 1, "im": 0}, ...], "D": [...]}
//   {"real_algebra": {"dim": 4, "f": [{"up": 4, "lo": [1, 2], "value": -2}], "J": [[...]]}}
//   {"catalog": "so3c"}
// plus an optional "metric": n x n array whose entries are [re, im] pairs or
// plain numbers. Indices are 1-based. C and f entries are antisymmetric in
// "lo"; the partner entry is filled in and, when given, must agree.

#include <string>
#include <vector>

#include <json.hpp>

#include "htorsion/classifiers.hpp"
#include "htorsion/functionals.hpp"
#include "htorsion/lie_hermitian.hpp"
#include "htorsion/optimizer.hpp"
#include "htorsion/torsion_engine.hpp"

namespace htorsion {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "htorsion";
inline constexpr const char* kToolVersion = "0.1.0";

struct InputDocument {
  Json echo;
  HermitianStructure hs;
};

/// Throws InvalidInput (or a subclass) on schema errors, a non-positive metric
/// or structure constants that fail validation.
InputDocument parse_input(const Json& doc, double tol = kStructureTolerance);
InputDocument load_input(const std::string& path, double tol = kStructureTolerance);
InputDocument catalog_input(const std::string& name);

struct AnalysisResult {
  InputDocument input;
  double tol = 0.0;
  ValidationReport validation;
  TorsionPackage pkg;
  ClassificationReport classification;
  ResidualReport residuals;
};

AnalysisResult run_analysis(InputDocument input, double tol);

struct CriticalResult {
  InputDocument input;
  double tol = 0.0;
  std::string functional;  ///< "torsion" or "gauduchon"
  ResidualReport residuals;
  double residual = 0.0;
  bool critical = false;
};

CriticalResult run_check_critical(InputDocument input, const std::string& functional, double tol);

struct VariationSample {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double deviation = 0.0;
};

struct VariationResult {
  InputDocument input;
  int directions = 0;
  double fd_step = 0.0;
  std::uint64_t seed = 0;
  /// The analytic formula integrates by parts, which needs a unimodular algebra.
  bool unimodular = false;
  std::vector<VariationSample> samples;
  double max_deviation = 0.0;
  bool passed = false;
};

inline constexpr double kVariationTolerance = 1e-5;
inline constexpr double kVariationAbsoluteFloor = 1e-9;

/// |a - f| / max(|a|, |f|), or 0 when both are below the absolute floor.
double variation_deviation(double analytic, double fd);
/// Five-point central difference of F along H + t h.
double fd_first_variation(const HermitianStructure& hs, const HermMat& h, double step);

VariationResult run_variation_check(InputDocument input, int directions, double fd_step, std::uint64_t seed);

struct OptimizeResult {
  InputDocument input;
  double tol = 0.0;
  OptimConfig config;
  std::uint64_t seed = 0;
  double perturb = 0.0;
  HermMat start_metric;
  OptimTrace trace;
  AnalysisResult final_analysis;
};

OptimizeResult run_optimize(InputDocument input, const OptimConfig& cfg, std::uint64_t seed, double perturb,
                            double tol);

Json to_json(const AnalysisResult& r);
Json to_json(const CriticalResult& r);
Json to_json(const VariationResult& r);
Json to_json(const OptimizeResult& r);

std::string to_text(const AnalysisResult& r);
std::string to_text(const CriticalResult& r);
std::string to_text(const VariationResult& r);
std::string to_text(const OptimizeResult& r);

/// Rendering of an invariant form, e.g. "-phi_1^phi_2 + i phi_1^conj(phi_1)".
std::string render_form(const InvariantForm& f);
/// One line per generator: "d phi_j = ...".
std::vector<std::string> structure_equations(const StructureConstants& sc);

struct CatalogFamily {
  std::string pattern;
  std::string parameters;
  std::string description;
};

std::vector<CatalogFamily> catalog_families();
Json catalog_list_json();
std::string catalog_list_text();
/// Throws UnknownCatalogEntry.
Json catalog_show_json(const std::string& name);
std::string catalog_show_text(const std::string& name);

/// Shortest round-trip serialization used for every structured report.
std::string dump(const Json& j);

}  // namespace htorsion
