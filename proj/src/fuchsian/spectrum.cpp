#include "geoflow/fuchsian/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "geoflow/error.hpp"
#include "geoflow/io.hpp"
#include "geoflow/kv.hpp"
#include "geoflow/version.hpp"

namespace geoflow {

namespace {

constexpr double kAxisStep = 0.05;
constexpr double kAxisTie = 1e-7;
constexpr double kKeyTolerance = 1e-6;
constexpr const char* kCsvHeader = "canonical_word,trace_abs,length,primitive,multiplicity_group_id";

bool is_identity(const Isometry& g) { return g.b() == Complex(0.0, 0.0) && g.a() == Complex(1.0, 0.0); }

bool same_key(const AxisKey& x, const AxisKey& y) {
  return std::abs(angle_difference(x.forward_angle, y.forward_angle)) <= kKeyTolerance &&
         std::abs(angle_difference(x.backward_angle, y.backward_angle)) <= kKeyTolerance &&
         std::abs(x.length - y.length) <= kKeyTolerance;
}

std::string describe(const AxisKey& k) {
  std::ostringstream out;
  out.precision(12);
  out << "(length " << k.length << ", endpoints " << k.forward_angle << " <- " << k.backward_angle << ")";
  return out.str();
}

}  // namespace

TraceClass class_axis(const SurfaceModel& surface, const GeodesicClass& c) {
  return trace_class(surface.evaluate(c.canonical_word));
}

SpectrumTable::SpectrumTable(SpectrumMetadata meta, std::vector<GeodesicClass> rows)
    : meta_(std::move(meta)), rows_(std::move(rows)) {}

std::vector<LengthBucket> SpectrumTable::buckets() const {
  std::vector<LengthBucket> out;
  std::size_t current = static_cast<std::size_t>(-1);
  for (const auto& r : rows_) {
    if (out.empty() || r.multiplicity_group_id != current) {
      out.push_back({r.length, 0, r.canonical_word});
      current = r.multiplicity_group_id;
    }
    ++out.back().multiplicity;
  }
  return out;
}

std::size_t SpectrumTable::count_P(double t, bool primitive_only) const {
  if (t > meta_.cutoff) throw Error(ErrorKind::out_of_range, "count_P beyond the spectrum cutoff");
  std::size_t n = 0;
  for (const auto& r : rows_) {
    if (r.length > t) break;
    if (!primitive_only || r.primitive) ++n;
  }
  return n;
}

std::size_t SpectrumTable::count_window(double t, double eps, bool primitive_only) const {
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "window half-width must be positive");
  if (t + eps > meta_.cutoff) throw Error(ErrorKind::out_of_range, "count window beyond the spectrum cutoff");
  std::size_t n = 0;
  for (const auto& r : rows_) {
    if (r.length > t + eps) break;
    if (r.length > t - eps && (!primitive_only || r.primitive)) ++n;
  }
  return n;
}

double default_margin(const SurfaceModel& surface) {
  return 2.0 * std::log(std::cosh(surface.axis_reach())) + 1e-6;
}

AxisKey axis_key(const FundamentalDomain& domain, const Isometry& g) {
  const TraceClass tc = trace_class(g);
  if (tc.type != IsometryType::hyperbolic) {
    throw Error(ErrorKind::invalid_argument, "axis key of a non-hyperbolic element");
  }
  // Walk one period of the closed geodesic in F, recording the line through
  // every reduced sample; reading lines off the samples avoids accumulating
  // long matrix products.
  PhasePoint v = domain.reduce(line_foot(tc.attracting, tc.repelling)).phase;
  std::vector<Endpoints> lines{endpoints(v)};
  const int steps = static_cast<int>(std::ceil(tc.translation_length / kAxisStep));
  const double step = tc.translation_length / steps;
  for (int k = 1; k < steps; ++k) {
    const auto r = domain.reduce(flow(v, step));
    v = r.phase;
    if (!is_identity(r.to_domain)) lines.push_back(endpoints(v));
  }

  // The nearest translate has its foot point in F, and the walk passes within
  // half a step of it, so it is t L for some recorded line L and t in the
  // test set.
  AxisKey best;
  best.distance = std::numeric_limits<double>::infinity();
  best.length = tc.translation_length;
  // Angles just below 2 pi count as 0 so the tie-break does not flip on rounding.
  auto unwrap = [](double a) { return a > kTwoPi - kKeyTolerance ? a - kTwoPi : a; };
  auto consider = [&](const BoundaryPoint& f, const BoundaryPoint& b) {
    const double d = line_distance_from_origin(f, b);
    const double fa = unwrap(f.angle());
    const double ba = unwrap(b.angle());
    bool take = d < best.distance - kAxisTie;
    if (!take && d <= best.distance + kAxisTie) {
      const double bf = unwrap(best.forward_angle);
      if (std::abs(fa - bf) > kKeyTolerance) {
        take = fa < bf;
      } else {
        take = ba < unwrap(best.backward_angle) - kKeyTolerance;
      }
    }
    if (take) {
      best.distance = d;
      best.forward_angle = f.angle();
      best.backward_angle = b.angle();
    }
  };
  for (const auto& line : lines) {
    consider(line.forward, line.backward);
    for (const auto& t : domain.test_set()) consider(apply(t, line.forward), apply(t, line.backward));
  }
  return best;
}

SpectrumTable build_spectrum(const SurfaceModel& surface, double cutoff, const SpectrumOptions& options) {
  const double margin = options.margin < 0.0 ? default_margin(surface) : options.margin;
  const Ball ball = enumerate_ball(surface, cutoff + margin, options.ball);
  return build_spectrum(surface, ball, cutoff, options);
}

SpectrumTable build_spectrum(const SurfaceModel& surface, const Ball& ball, double cutoff,
                             const SpectrumOptions& options) {
  if (!(cutoff > 0.0)) throw Error(ErrorKind::invalid_argument, "spectrum cutoff must be positive");
  const double margin = options.margin < 0.0 ? default_margin(surface) : options.margin;
  if (ball.radius() < cutoff + margin) {
    throw Error(ErrorKind::invalid_argument, "ball does not reach cutoff + margin");
  }

  struct Acc {
    double trace_abs;
    bool primitive;
  };
  std::map<Word, Acc> classes;
  ConjugacyCanonicalizer canon(surface);
  const bool crossval = options.crossval_limit > 0.0;
  std::unique_ptr<FundamentalDomain> domain;
  if (crossval) domain = std::make_unique<FundamentalDomain>(surface);
  std::map<Word, AxisKey> word_keys;
  std::size_t crossvalidated = 0;

  for (const auto& e : ball.elements()) {
    if (e.word.empty()) continue;
    const TraceClass tc = trace_class(e.matrix);
    if (tc.type != IsometryType::hyperbolic) {
      throw Error(ErrorKind::spectrum_inconsistency, "non-hyperbolic group element " + format_word(e.word));
    }
    if (tc.translation_length > cutoff) continue;
    const CanonicalClass cc = canon.canonicalize(e.word);
    const auto [it, fresh] = classes.try_emplace(cc.word, Acc{tc.trace_abs, cc.primitive});
    if (!fresh && std::abs(it->second.trace_abs - tc.trace_abs) > options.trace_tolerance) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "class " << format_word(cc.word) << " holds traces " << it->second.trace_abs << " and "
          << tc.trace_abs << " (element " << format_word(e.word) << ")";
      throw Error(ErrorKind::spectrum_inconsistency, msg.str());
    }
    if (crossval && tc.translation_length <= options.crossval_limit) {
      const AxisKey key = axis_key(*domain, e.matrix);
      ++crossvalidated;
      const auto [kt, kfresh] = word_keys.try_emplace(cc.word, key);
      if (!kfresh && !same_key(kt->second, key)) {
        throw Error(ErrorKind::spectrum_inconsistency,
                    "word class " + format_word(cc.word) + " spans two axis classes " + describe(kt->second) +
                        " and " + describe(key) + " (element " + format_word(e.word) + ")");
      }
    }
  }

  // Distinct word classes must have distinct axis classes.
  if (crossval) {
    std::vector<std::pair<AxisKey, const Word*>> keyed;
    for (const auto& [w, k] : word_keys) keyed.emplace_back(k, &w);
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first.length < y.first.length; });
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      for (std::size_t j = i + 1; j < keyed.size() && keyed[j].first.length - keyed[i].first.length <= kKeyTolerance;
           ++j) {
        if (same_key(keyed[i].first, keyed[j].first)) {
          throw Error(ErrorKind::spectrum_inconsistency,
                      "word classes " + format_word(*keyed[i].second) + " and " + format_word(*keyed[j].second) +
                          " share the axis class " + describe(keyed[i].first));
        }
      }
    }
  }

  // Oriented pairing and iterates.
  for (const auto& [w, acc] : classes) {
    const CanonicalClass inv = canon.canonicalize(inverse(w));
    const auto it = classes.find(inv.word);
    if (it == classes.end() || std::abs(it->second.trace_abs - acc.trace_abs) > options.trace_tolerance) {
      throw Error(ErrorKind::spectrum_inconsistency, "class " + format_word(w) + " has no inverse class");
    }
  }
  std::map<Word, bool> is_iterate;
  for (const auto& [w, acc] : classes) {
    const double len = 2.0 * std::acosh(acc.trace_abs / 2.0);
    Word power = w;
    for (int k = 2; k * len <= cutoff - kKeyTolerance; ++k) {
      power += w;
      const CanonicalClass pc = canon.canonicalize(power);
      if (classes.find(pc.word) == classes.end()) {
        throw Error(ErrorKind::spectrum_inconsistency, "iterate of " + format_word(w) + " missing from the spectrum");
      }
      is_iterate[pc.word] = true;
    }
  }
  for (const auto& [w, acc] : classes) {
    if (acc.primitive == (is_iterate.count(w) > 0)) {
      throw Error(ErrorKind::spectrum_inconsistency, "primitivity of " + format_word(w) + " is inconsistent");
    }
  }

  std::vector<GeodesicClass> rows;
  rows.reserve(classes.size());
  for (const auto& [w, acc] : classes) {
    GeodesicClass c;
    c.canonical_word = w;
    c.trace_abs = acc.trace_abs;
    c.length = 2.0 * std::acosh(acc.trace_abs / 2.0);
    c.primitive = acc.primitive;
    rows.push_back(std::move(c));
  }
  std::sort(rows.begin(), rows.end(), [](const GeodesicClass& x, const GeodesicClass& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.canonical_word < y.canonical_word;
  });
  std::size_t group = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].length - rows[i - 1].length > options.tie_tolerance) ++group;
    rows[i].multiplicity_group_id = group;
  }

  SpectrumMetadata meta;
  meta.surface = surface.name();
  meta.cutoff = cutoff;
  meta.c_prune = options.ball.c_prune;
  meta.margin = margin;
  meta.tie_tolerance = options.tie_tolerance;
  meta.trace_tolerance = options.trace_tolerance;
  meta.crossval_limit = crossval ? options.crossval_limit : 0.0;
  meta.ball_size = ball.size();
  meta.crossvalidated_elements = crossvalidated;
  return SpectrumTable(std::move(meta), std::move(rows));
}

std::string spectrum_csv(const SpectrumTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : table.rows()) {
    out += format_word(r.canonical_word);
    out += ',';
    out += format_double(r.trace_abs);
    out += ',';
    out += format_double(r.length);
    out += r.primitive ? ",true," : ",false,";
    out += std::to_string(r.multiplicity_group_id);
    out += '\n';
  }
  return out;
}

SpectrumTable parse_spectrum_csv(const std::string& csv, const SpectrumMetadata& meta) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorKind::io, "spectrum CSV: bad header");
  std::vector<GeodesicClass> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw Error(ErrorKind::io, "spectrum CSV: expected 5 fields in '" + line + "'");
    GeodesicClass c;
    c.canonical_word = parse_word(f[0]);
    c.trace_abs = parse_double("trace_abs", f[1]);
    c.length = parse_double("length", f[2]);
    if (f[3] != "true" && f[3] != "false") throw Error(ErrorKind::io, "spectrum CSV: bad primitive flag");
    c.primitive = f[3] == "true";
    c.multiplicity_group_id = static_cast<std::size_t>(parse_integer("multiplicity_group_id", f[4]));
    rows.push_back(std::move(c));
  }
  return SpectrumTable(meta, std::move(rows));
}

std::string spectrum_metadata_json(const SpectrumTable& table, const std::string& csv_sha256,
                                   const std::string& build_time) {
  const SpectrumMetadata& m = table.metadata();
  nlohmann::ordered_json j;
  j["surface"] = m.surface;
  j["cutoff"] = m.cutoff;
  j["c_prune"] = m.c_prune;
  j["margin"] = m.margin;
  j["tie_tolerance"] = m.tie_tolerance;
  j["trace_tolerance"] = m.trace_tolerance;
  j["crossval_limit"] = m.crossval_limit;
  j["ball_size"] = m.ball_size;
  j["crossvalidated_elements"] = m.crossvalidated_elements;
  j["classes"] = table.rows().size();
  j["csv_sha256"] = csv_sha256;
  j["build_time"] = build_time;
  j["tool_version"] = kToolVersion;
  return j.dump(2) + "\n";
}

SpectrumMetadata parse_spectrum_metadata_json(const std::string& json, std::string* csv_sha256) {
  try {
    const auto j = nlohmann::json::parse(json);
    SpectrumMetadata m;
    m.surface = j.at("surface").get<std::string>();
    m.cutoff = j.at("cutoff").get<double>();
    m.c_prune = j.at("c_prune").get<double>();
    m.margin = j.at("margin").get<double>();
    m.tie_tolerance = j.at("tie_tolerance").get<double>();
    m.trace_tolerance = j.at("trace_tolerance").get<double>();
    m.crossval_limit = j.at("crossval_limit").get<double>();
    m.ball_size = j.at("ball_size").get<std::size_t>();
    m.crossvalidated_elements = j.at("crossvalidated_elements").get<std::size_t>();
    if (csv_sha256 != nullptr) *csv_sha256 = j.at("csv_sha256").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("spectrum metadata: ") + e.what());
  }
}

void save_spectrum(const SpectrumTable& table, const std::filesystem::path& csv_path) {
  const std::string csv = spectrum_csv(table);
  write_text_file(csv_path, csv);
  std::filesystem::path meta = csv_path;
  meta += ".json";
  write_text_file(meta, spectrum_metadata_json(table, sha256_hex(csv), utc_timestamp()));
}

SpectrumTable load_spectrum(const std::filesystem::path& csv_path) {
  const std::string csv = read_text_file(csv_path.string());
  std::filesystem::path meta_path = csv_path;
  meta_path += ".json";
  std::string expected;
  const SpectrumMetadata meta = parse_spectrum_metadata_json(read_text_file(meta_path.string()), &expected);
  if (sha256_hex(csv) != expected) throw Error(ErrorKind::io, "spectrum CSV hash does not match its sidecar");
  return parse_spectrum_csv(csv, meta);
}

}  // namespace geoflow
