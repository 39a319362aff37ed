#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/kv.hpp"
#include "geoflow/mme/mme.hpp"
#include "geoflow/verify/battery.hpp"

namespace geoflow::cli {

struct RunConfig {
  std::string surface = "bolza";
  std::optional<double> radius;
  std::vector<double> t_grid{8.0, 10.0, 12.0};
  double epsilon = 0.5;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 7;
  std::string tolerance_profile = "standard";
  KeyValues tolerance_overrides;  // "tol.<field>" keys
  std::filesystem::path out = "geoflow-out";
  std::filesystem::path cache_dir = ".geoflow-cache";
  std::optional<PhaseBox> box;

  ToleranceProfile tolerances() const;
  /// Positive numbers; with `uses_t`, also max(t_grid) + epsilon <= radius
  /// when a radius is set.
  void validate(bool uses_t) const;
};

/// "x,y,theta,r,alpha": centre (x, y) in the disk, direction theta, position
/// radius r, angular half-width alpha.
PhaseBox parse_box(const std::string& text);
std::string format_box(const PhaseBox& b);

/// Applies the keys of a config file (surface, radius, t, epsilon, samples,
/// seed, tolerance_profile, out, cache_dir, box, tol.*). Unknown keys are an error.
void apply_config(RunConfig& cfg, const KeyValues& kv);

}  // namespace geoflow::cli
