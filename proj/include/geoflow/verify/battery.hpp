#pragma once

// The acceptance battery shared by the acceptance test and `geoflow verify-all`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geoflow/fuchsian/spectrum.hpp"
#include "geoflow/kv.hpp"

namespace geoflow {

struct ToleranceProfile {
  std::string name = "standard";
  double relator = 1e-8;
  double generator_length = 1e-9;
  double growth_lo = 0.9, growth_hi = 1.1;
  double busemann = 1e-6;
  double transformation = 0.05;
  double knieper = 0.05;
  double area = 0.005;
  double expansion = 1e-9;
  double holonomy = 0.05;
  double mixing_sigmas = 3.0;
  double equidistribution = 0.2;
  double window_lo = 0.8, window_hi = 1.3;
  double headline_lo = 0.85, headline_hi = 1.25;
  double crossings = 0.25;
  double riccati = 1e-6;

  /// "standard" (the acceptance tolerances) or "strict" (every band halved).
  static ToleranceProfile named(const std::string& name);
  /// Keys "tol.<field>" override single fields; other keys are ignored.
  void apply_overrides(const KeyValues& kv);
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BatteryOptions {
  std::uint64_t seed = 7;
  ToleranceProfile tolerances;
  /// Supplies spectrum tables (e.g. from a cache); defaults to build_spectrum.
  std::function<SpectrumTable(const SurfaceModel&, double cutoff)> spectrum;
  /// Called after each criterion with its wall time; not part of the report.
  std::function<void(const CriterionResult&, double seconds)> progress;
};

struct BatteryReport {
  std::uint64_t seed = 0;
  std::string profile;
  std::vector<CriterionResult> results;

  bool all_passed() const;
  /// One "PASS|FAIL <id> <name>: <detail>" line per criterion.
  std::string text() const;
  std::string json() const;
};

/// Criteria 1-14, then 15: a second full run of 1-14 compared byte for byte.
BatteryReport run_battery(const BatteryOptions& options);
/// Single criterion (1-14).
CriterionResult run_criterion(int id, const BatteryOptions& options);

const std::vector<std::string>& criterion_names();

}  // namespace geoflow
