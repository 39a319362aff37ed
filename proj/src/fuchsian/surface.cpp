#include "geoflow/fuchsian/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geoflow/error.hpp"
#include "geoflow/kv.hpp"

namespace geoflow {

namespace {

constexpr double kRelatorTolerance = 1e-8;

bool near_plus_minus_identity(const Isometry& g) {
  const Isometry n = g.renormalized();
  const double off = std::abs(n.b());
  return off <= kRelatorTolerance && (std::abs(n.a() - 1.0) <= kRelatorTolerance ||
                                      std::abs(n.a() + 1.0) <= kRelatorTolerance);
}

}  // namespace

double SurfaceModel::area() const { return 4.0 * std::numbers::pi * (genus() - 1); }

Isometry SurfaceModel::evaluate(std::string_view word) const {
  Isometry g;
  for (char c : word) g = g * letters_.at(static_cast<Letter>(c));
  return g.renormalized();
}

SurfaceModel load_surface(const SurfaceConfig& config) {
  const std::size_t n_gen = config.generators.size();
  if (n_gen < 4 || n_gen % 2 != 0) {
    throw Error(ErrorKind::bad_surface, "a genus g >= 2 surface needs 2g generators");
  }
  if (!(config.entropy_h > 0.0)) throw Error(ErrorKind::bad_surface, "entropy_h must be positive");
  if (!(config.domain_diameter > 0.0)) {
    throw Error(ErrorKind::bad_surface, "domain_diameter must be positive");
  }

  SurfaceModel s;
  s.name_ = config.name;
  s.entropy_h_ = config.entropy_h;
  s.domain_diameter_ = config.domain_diameter;
  s.axis_reach_ = config.axis_reach.value_or(config.domain_diameter);
  for (const auto& g : config.generators) {
    const Isometry n = g.renormalized();
    s.letters_.push_back(n);
    s.letters_.push_back(n.inverse());
  }

  const int n_letters = s.letter_count();
  std::vector<int> seen(n_letters, 0);
  for (char c : config.relator) {
    const auto x = static_cast<Letter>(c);
    if (x >= n_letters) throw Error(ErrorKind::bad_surface, "relator letter out of range");
    ++seen[x];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; })) {
    throw Error(ErrorKind::bad_surface, "relator must use every letter exactly once");
  }
  s.relator_ = config.relator;
  if (!near_plus_minus_identity(s.evaluate(s.relator_))) {
    throw Error(ErrorKind::bad_surface, "relator does not close to +-identity within 1e-8");
  }

  s.inradius_ = std::numeric_limits<double>::infinity();
  for (Letter x = 0; x < n_letters; ++x) {
    TraceClass tc;
    try {
      tc = trace_class(s.letters_[x]);
    } catch (const Error& e) {
      throw Error(ErrorKind::bad_surface, std::string("generator classification: ") + e.what());
    }
    if (tc.type != IsometryType::hyperbolic) {
      throw Error(ErrorKind::bad_surface, "generator " + format_word(Word(1, static_cast<char>(x))) +
                                              " is not hyperbolic");
    }
    s.inradius_ = std::min(s.inradius_, dist_from_origin(apply(s.letters_[x], DiskPoint::origin())) / 2.0);
  }
  return s;
}

SurfaceConfig bolza_config() {
  const double sqrt2 = std::numbers::sqrt2;
  const double diag = 1.0 + sqrt2;
  const double off = std::sqrt(2.0 + 2.0 * sqrt2);
  SurfaceConfig c;
  c.name = "bolza";
  for (int k = 0; k < 4; ++k) {
    c.generators.emplace_back(Complex(diag, 0.0), std::polar(off, k * std::numbers::pi / 4.0));
  }
  // a B c D A b C d: the side-pairing relation of the regular octagon.
  c.relator = parse_word("aBcDAbCd");
  c.entropy_h = 1.0;
  // Circumradius of the regular octagon with angles pi/4: cosh r = cot^2(pi/8).
  c.domain_diameter = std::acosh(diag * diag);
  // Lines along the octagon edges stay at distance exactly the inradius from
  // every orbit point; every other line gets closer.
  c.axis_reach = std::acosh(diag);
  return c;
}

SurfaceModel bolza_surface() { return load_surface(bolza_config()); }

SurfaceConfig parse_surface_config(const std::string& text) {
  const KeyValues kv = parse_key_values(text);
  SurfaceConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "name") {
      c.name = value;
    } else if (key == "relator") {
      c.relator = parse_word(value);
    } else if (key == "entropy_h") {
      c.entropy_h = parse_double(key, value);
    } else if (key == "domain_diameter") {
      c.domain_diameter = parse_double(key, value);
    } else if (key == "axis_reach") {
      c.axis_reach = parse_double(key, value);
    } else if (key.rfind("generator.", 0) != 0) {
      throw Error(ErrorKind::config, "unknown surface key: " + key);
    }
  }
  // generator.1 .. generator.2g, each "re_a im_a re_b im_b".
  for (int i = 1;; ++i) {
    const auto it = kv.find("generator." + std::to_string(i));
    if (it == kv.end()) break;
    std::istringstream in(it->second);
    double ra = 0, ia = 0, rb = 0, ib = 0;
    if (!(in >> ra >> ia >> rb >> ib)) {
      throw Error(ErrorKind::config, it->first + ": expected four numbers");
    }
    c.generators.emplace_back(Complex(ra, ia), Complex(rb, ib));
  }
  return c;
}

SurfaceModel surface_from_spec(const std::string& preset_or_path) {
  if (preset_or_path == "bolza") return bolza_surface();
  return load_surface(parse_surface_config(read_text_file(preset_or_path)));
}

}  // namespace geoflow
