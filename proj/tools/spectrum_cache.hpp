#pragma once

#include <filesystem>
#include <string>

#include "geoflow/fuchsian/spectrum.hpp"

namespace geoflow::cli {

struct CachedSpectrum {
  SpectrumTable table;
  std::filesystem::path csv_path;
  std::string sha256;
  bool hit = false;
  std::string note;  // why a cached file was rebuilt, if it was
};

/// Loads <dir>/spectrum-<surface>-<key>-R<cutoff>.csv when its sidecar hash and
/// metadata match, otherwise builds and writes it. Writers hold <csv>.lock,
/// created exclusively; waits up to `wait_seconds` for another writer.
CachedSpectrum cached_spectrum(const SurfaceModel& surface, double cutoff, const std::filesystem::path& dir,
                               double wait_seconds = 600.0);

/// Short hash of the generator matrices, so surface files with the same name
/// do not share a cache entry.
std::string surface_key(const SurfaceModel& surface);

}  // namespace geoflow::cli
