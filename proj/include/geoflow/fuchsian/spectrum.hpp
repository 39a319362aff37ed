#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "geoflow/fuchsian/ball.hpp"
#include "geoflow/fuchsian/canonical.hpp"
#include "geoflow/fuchsian/domain.hpp"

namespace geoflow {

/// One oriented conjugacy class (free homotopy class of a closed geodesic).
struct GeodesicClass {
  Word canonical_word;
  double trace_abs = 2.0;
  double length = 0.0;
  bool primitive = true;
  /// Rows whose lengths agree within the tie tolerance share an id.
  std::size_t multiplicity_group_id = 0;

  friend bool operator==(const GeodesicClass&, const GeodesicClass&) = default;
};

/// Axis of the representative obtained by evaluating the canonical word.
TraceClass class_axis(const SurfaceModel& surface, const GeodesicClass& c);

struct LengthBucket {
  double length = 0.0;
  std::size_t multiplicity = 0;
  Word representative;
};

struct SpectrumMetadata {
  std::string surface;
  double cutoff = 0.0;
  double c_prune = 0.0;
  double margin = 0.0;
  double tie_tolerance = 1e-6;
  double trace_tolerance = 1e-6;
  double crossval_limit = 8.0;
  std::size_t ball_size = 0;
  std::size_t crossvalidated_elements = 0;

  friend bool operator==(const SpectrumMetadata&, const SpectrumMetadata&) = default;
};

class SpectrumTable {
 public:
  SpectrumTable() = default;
  SpectrumTable(SpectrumMetadata meta, std::vector<GeodesicClass> rows);

  const SpectrumMetadata& metadata() const { return meta_; }
  double cutoff() const { return meta_.cutoff; }
  const std::string& surface() const { return meta_.surface; }
  /// Sorted by (length, canonical word).
  const std::vector<GeodesicClass>& rows() const { return rows_; }
  /// Lengths strictly increasing; ties within the tolerance merged.
  std::vector<LengthBucket> buckets() const;

  /// Classes with length <= t. Throws out-of-range past the cutoff.
  std::size_t count_P(double t, bool primitive_only = false) const;
  /// Classes with length in (t - eps, t + eps].
  std::size_t count_window(double t, double eps, bool primitive_only = false) const;

  friend bool operator==(const SpectrumTable&, const SpectrumTable&) = default;

 private:
  SpectrumMetadata meta_;
  std::vector<GeodesicClass> rows_;
};

struct SpectrumOptions {
  BallOptions ball;
  /// Extra enumeration radius. Negative selects 2 ln cosh(axis_reach): a class
  /// of length l whose axis passes within r of o has a representative of
  /// displacement 2 asinh(cosh r sinh(l / 2)) < l + 2 ln cosh r.
  double margin = -1.0;
  double tie_tolerance = 1e-6;
  double trace_tolerance = 1e-6;
  /// Classes up to this length are cross-checked against axis dedup.
  double crossval_limit = 8.0;
};

double default_margin(const SurfaceModel& surface);

/// Geometric class key: the translate of the oriented axis nearest the origin
/// (ties within 1e-7 broken by endpoint angles) and the translation length.
struct AxisKey {
  double forward_angle = 0.0;
  double backward_angle = 0.0;
  double distance = 0.0;
  double length = 0.0;
};
AxisKey axis_key(const FundamentalDomain& domain, const Isometry& g);

SpectrumTable build_spectrum(const SurfaceModel& surface, double cutoff, const SpectrumOptions& options = {});
/// Builds from an existing ball, which must reach cutoff + margin.
SpectrumTable build_spectrum(const SurfaceModel& surface, const Ball& ball, double cutoff,
                             const SpectrumOptions& options = {});

std::string spectrum_csv(const SpectrumTable& table);
SpectrumTable parse_spectrum_csv(const std::string& csv, const SpectrumMetadata& meta);
std::string spectrum_metadata_json(const SpectrumTable& table, const std::string& csv_sha256,
                                   const std::string& build_time);
SpectrumMetadata parse_spectrum_metadata_json(const std::string& json, std::string* csv_sha256 = nullptr);

void save_spectrum(const SpectrumTable& table, const std::filesystem::path& csv_path);
/// Reads the CSV and its ".json" sidecar; throws io if the hash does not match.
SpectrumTable load_spectrum(const std::filesystem::path& csv_path);

}  // namespace geoflow
