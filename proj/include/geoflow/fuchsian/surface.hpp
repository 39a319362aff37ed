#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoflow/fuchsian/word.hpp"
#include "geoflow/hypgeom.hpp"

namespace geoflow {

/// Input for load_surface: the 2g forward generators; inverses are derived.
struct SurfaceConfig {
  std::string name;
  std::vector<Isometry> generators;
  Word relator;
  double entropy_h = 1.0;
  /// Upper bound on dist(o, x) over the Dirichlet domain centred at o.
  double domain_diameter = 0.0;
  /// Upper bound, over all geodesic lines, of the distance from the line to the
  /// nearest orbit point. Defaults to domain_diameter when absent.
  std::optional<double> axis_reach;
};

/// A cocompact surface group together with its Dirichlet domain data.
class SurfaceModel {
 public:
  const std::string& name() const { return name_; }
  int genus() const { return static_cast<int>(letters_.size()) / 4; }
  int letter_count() const { return static_cast<int>(letters_.size()); }
  /// Letter i acts by letters()[i]; letter i ^ 1 is its inverse.
  const std::vector<Isometry>& letters() const { return letters_; }
  const Isometry& letter(Letter x) const { return letters_[x]; }
  const Word& relator() const { return relator_; }
  double entropy_h() const { return entropy_h_; }
  double domain_diameter() const { return domain_diameter_; }
  double axis_reach() const { return axis_reach_; }
  /// Half the shortest generator displacement: radius of the disk about o
  /// contained in the Dirichlet domain.
  double inradius() const { return inradius_; }
  /// Hyperbolic area of the fundamental domain, 4 pi (g - 1).
  double area() const;

  Isometry evaluate(std::string_view word) const;

 private:
  friend SurfaceModel load_surface(const SurfaceConfig& config);

  std::string name_;
  std::vector<Isometry> letters_;
  Word relator_;
  double entropy_h_ = 1.0;
  double domain_diameter_ = 0.0;
  double axis_reach_ = 0.0;
  double inradius_ = 0.0;
};

/// Validates the relator (product = +-I within 1e-8, each letter exactly once)
/// and that every generator is hyperbolic; throws bad-surface otherwise.
SurfaceModel load_surface(const SurfaceConfig& config);

/// Genus-2 Bolza surface: generators are the rotations by k pi / 4 (k = 0..3) of
/// [[1 + sqrt2, sqrt(2 + 2 sqrt2)], [sqrt(2 + 2 sqrt2), 1 + sqrt2]].
SurfaceConfig bolza_config();
SurfaceModel bolza_surface();

/// Flat "key = value" surface description; see README for the keys.
SurfaceConfig parse_surface_config(const std::string& text);
/// "bolza" or a path to a surface file.
SurfaceModel surface_from_spec(const std::string& preset_or_path);

}  // namespace geoflow
