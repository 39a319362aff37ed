#include "spectrum_cache.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <thread>

#include "geoflow/error.hpp"
#include "geoflow/io.hpp"
#include "geoflow/kv.hpp"

namespace geoflow::cli {

namespace {

class LockFile {
 public:
  LockFile(std::filesystem::path path, double wait_seconds) : path_(std::move(path)) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(wait_seconds);
    for (;;) {
      // "x": fail if the file exists (C11 exclusive create).
      if (std::FILE* f = std::fopen(path_.c_str(), "wx")) {
        std::fclose(f);
        return;
      }
      if (errno != EEXIST) throw Error(ErrorKind::io, "cannot create lock file " + path_.string());
      if (std::chrono::steady_clock::now() > deadline)
        throw Error(ErrorKind::io, "cache entry is locked by another writer: " + path_.string());
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
  }
  ~LockFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  std::filesystem::path path_;
};

// Empty note on success; otherwise the reason the entry cannot be used.
std::string try_load(const std::filesystem::path& csv, const SurfaceModel& surface, double cutoff,
                     CachedSpectrum& out) {
  if (!std::filesystem::exists(csv)) return "missing";
  try {
    SpectrumTable t = load_spectrum(csv);
    if (t.surface() != surface.name() || t.cutoff() != cutoff) return "metadata mismatch";
    out.table = std::move(t);
    out.sha256 = sha256_hex(read_text_file(csv.string()));
    return "";
  } catch (const Error& e) {
    return e.what();
  }
}

}  // namespace

std::string surface_key(const SurfaceModel& surface) {
  std::string text = surface.name();
  for (const auto& g : surface.letters()) {
    for (double x : {g.a().real(), g.a().imag(), g.b().real(), g.b().imag()}) text += "," + format_double(x);
  }
  return sha256_hex(text).substr(0, 12);
}

CachedSpectrum cached_spectrum(const SurfaceModel& surface, double cutoff, const std::filesystem::path& dir,
                               double wait_seconds) {
  std::filesystem::create_directories(dir);
  CachedSpectrum out;
  out.csv_path = dir / ("spectrum-" + surface.name() + "-" + surface_key(surface) + "-R" + format_double(cutoff) + ".csv");
  const std::string first = try_load(out.csv_path, surface, cutoff, out);
  if (first.empty()) {
    out.hit = true;
    return out;
  }
  std::filesystem::path lock_path = out.csv_path;
  lock_path += ".lock";
  const LockFile lock(lock_path, wait_seconds);
  // Another writer may have finished while we waited.
  const std::string second = try_load(out.csv_path, surface, cutoff, out);
  if (second.empty()) {
    out.hit = true;
    return out;
  }
  if (second != "missing") out.note = "rebuilt: " + second;
  out.table = build_spectrum(surface, cutoff);
  save_spectrum(out.table, out.csv_path);
  out.sha256 = sha256_hex(read_text_file(out.csv_path.string()));
  return out;
}

}  // namespace geoflow::cli
