#include "run_config.hpp"

#include <algorithm>
#include <sstream>

#include "geoflow/error.hpp"
#include "geoflow/io.hpp"

namespace geoflow::cli {

ToleranceProfile RunConfig::tolerances() const {
  ToleranceProfile p = ToleranceProfile::named(tolerance_profile);
  p.apply_overrides(tolerance_overrides);
  return p;
}

void RunConfig::validate(bool uses_t) const {
  const auto positive = [](const char* what, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::config, std::string(what) + " must be positive");
  };
  if (radius) positive("radius", *radius);
  positive("epsilon", epsilon);
  if (samples == 0) throw Error(ErrorKind::config, "samples must be positive");
  if (t_grid.empty()) throw Error(ErrorKind::config, "t grid is empty");
  for (double t : t_grid) positive("t", t);
  if (uses_t && radius && *std::max_element(t_grid.begin(), t_grid.end()) + epsilon > *radius + 1e-12)
    throw Error(ErrorKind::config, "max(t) + epsilon exceeds the radius");
}

PhaseBox parse_box(const std::string& text) {
  const std::vector<double> v = parse_double_list("box", text);
  if (v.size() != 5) throw Error(ErrorKind::config, "box needs five numbers x,y,theta,r,alpha");
  if (!(std::hypot(v[0], v[1]) < 0.99)) throw Error(ErrorKind::config, "box centre must lie inside the disk");
  try {
    return PhaseBox(PhasePoint(DiskPoint(Complex(v[0], v[1])), v[2]), v[3], v[4]);
  } catch (const Error& e) {
    throw Error(ErrorKind::config, std::string("invalid box: ") + e.what());
  }
}

std::string format_box(const PhaseBox& b) {
  const auto& c = b.center();
  return format_double(c.base.z().real()) + "," + format_double(c.base.z().imag()) + "," + format_double(c.dir) + "," +
         format_double(b.position_radius()) + "," + format_double(b.angle_halfwidth());
}

void apply_config(RunConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "surface") cfg.surface = value;
    else if (key == "radius") cfg.radius = parse_double(key, value);
    else if (key == "t") cfg.t_grid = parse_double_list(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "samples") {
      const long long n = parse_integer(key, value);
      if (n <= 0) throw Error(ErrorKind::config, "samples must be positive");
      cfg.samples = static_cast<std::size_t>(n);
    } else if (key == "seed") {
      const long long n = parse_integer(key, value);
      if (n < 0) throw Error(ErrorKind::config, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(n);
    } else if (key == "tolerance_profile") cfg.tolerance_profile = value;
    else if (key == "out") cfg.out = value;
    else if (key == "cache_dir") cfg.cache_dir = value;
    else if (key == "box") cfg.box = parse_box(value);
    else if (key.rfind("tol.", 0) == 0) cfg.tolerance_overrides[key] = value;
    else throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  }
}

}  // namespace geoflow::cli
