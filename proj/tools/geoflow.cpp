#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>

#include "geoflow/density/density.hpp"
#include "geoflow/dynlab/dynlab.hpp"
#include "geoflow/error.hpp"
#include "geoflow/fuchsian/ball.hpp"
#include "geoflow/io.hpp"
#include "geoflow/jacobi/jacobi.hpp"
#include "geoflow/random.hpp"
#include "geoflow/verify/battery.hpp"
#include "geoflow/version.hpp"
#include "run_config.hpp"
#include "spectrum_cache.hpp"

using namespace geoflow;
using namespace geoflow::cli;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kAcceptance = 1, kConfig = 2, kNumeric = 3 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::numeric_degeneracy:
    case ErrorKind::classification_ambiguous:
    case ErrorKind::degenerate_measure:
    case ErrorKind::reduction_failure:
    case ErrorKind::integration_error:
    case ErrorKind::step_size:
    case ErrorKind::partial_result:
    case ErrorKind::canonicalization_failure:
    case ErrorKind::spectrum_inconsistency:
      return kNumeric;
    default:
      return kConfig;
  }
}

int report_error(const std::string& kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << "\n";
  return code;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_out(const RunConfig& cfg, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(cfg.out);
  write_text_file(cfg.out / name, text);
}

PhaseBox default_box() { return PhaseBox(PhasePoint(DiskPoint(Complex(0.1, 0.05)), 0.3), 0.5, 0.9); }
PhaseBox default_box2() { return PhaseBox(PhasePoint(DiskPoint(Complex(-0.2, 0.1)), 2.0), 0.5, 0.9); }

double max_t(const RunConfig& cfg) { return *std::max_element(cfg.t_grid.begin(), cfg.t_grid.end()); }

CachedSpectrum spectrum_for(const RunConfig& cfg, const SurfaceModel& s, double cutoff) {
  CachedSpectrum c = cached_spectrum(s, cutoff, cfg.cache_dir);
  if (!c.note.empty()) std::cerr << "spectrum cache " << c.csv_path.string() << ": " << c.note << "\n";
  return c;
}

int cmd_spectrum(const RunConfig& cfg) {
  const SurfaceModel s = surface_from_spec(cfg.surface);
  const double r = cfg.radius.value_or(10.0);
  const CachedSpectrum c = spectrum_for(cfg, s, r);
  std::size_t primitive = 0;
  for (const auto& row : c.table.rows()) primitive += row.primitive ? 1 : 0;
  json j;
  j["command"] = "spectrum";
  j["surface"] = s.name();
  j["radius"] = r;
  j["cache"] = c.hit ? "hit" : "miss";
  j["path"] = c.csv_path.string();
  j["sha256"] = c.sha256;
  j["classes"] = c.table.rows().size();
  j["primitive_classes"] = primitive;
  emit(j);
  return kOk;
}

int cmd_count(const RunConfig& cfg) {
  const SurfaceModel s = surface_from_spec(cfg.surface);
  const double r = cfg.radius.value_or(max_t(cfg) + cfg.epsilon);
  const CachedSpectrum c = spectrum_for(cfg, s, r);
  std::optional<CountingBox> box;
  std::unique_ptr<OrbitCatalog> catalog;
  if (cfg.box) {
    const FundamentalDomain domain(s);
    box = CountingBox{*cfg.box, liouville_measure(domain, *cfg.box, cfg.samples, cfg.seed)};
    catalog = std::make_unique<OrbitCatalog>(domain, c.table, max_t(cfg) + cfg.epsilon, 0.01);
  }
  const CountingSuiteReport rep =
      counting_suite(c.table, cfg.t_grid, cfg.epsilon, s.entropy_h(), box ? &*box : nullptr, catalog.get());
  write_out(cfg, "counting.csv", counting_csv(rep));
  write_out(cfg, "window_relation.json", asymptotic_report_json(rep.window_relation));
  std::cout << "t,P_t,predicted,ratio\n";
  for (const auto& row : rep.rows) {
    if (row.law == "cumulative")
      std::cout << format_double(row.t) << ',' << format_double(row.observed) << ',' << format_double(row.predicted)
                << ',' << format_double(row.ratio) << '\n';
  }
  return kOk;
}

int cmd_density(const RunConfig& cfg, double exponent, int bins) {
  const SurfaceModel s = surface_from_spec(cfg.surface);
  const double r = cfg.radius.value_or(13.0);
  const double eq_r = std::min(r, 12.0);
  const Isometry g = s.letter(0);
  const Ball big = enumerate_ball(s, std::max(r, eq_r + displacement(g) + 0.01));
  const Ball ball = big.restricted(r);
  const DiskPoint o = DiskPoint::origin(), q(Complex(0.3, 0.0));
  const AngularBins b = AngularBins::centered(bins);
  const BoundaryMeasure mu_o = ps_density(ball, o, exponent);
  const TransformationReport tr = check_transformation(mu_o, ps_density(ball, q, exponent), s.entropy_h(), b);
  const EquivarianceReport er = check_equivariance(big, g, o, exponent, eq_r, b, 0.01);
  write_out(cfg, "density.csv", density_csv(mu_o, b));
  write_out(cfg, "density.json", density_metadata_json(mu_o, b));
  json j;
  j["command"] = "density";
  j["radius"] = r;
  j["exponent"] = exponent;
  j["bins"] = bins;
  j["total_mass"] = mu_o.total_mass();
  j["transformation"] = {{"q", "0.3"},
                         {"max_relative_deviation", tr.max_relative_deviation},
                         {"bins_used", tr.bins_used},
                         {"passed", tr.max_relative_deviation < cfg.tolerances().transformation}};
  j["equivariance"] = {{"generator", 0},
                       {"radius", eq_r},
                       {"max_relative_deviation", er.max_relative_deviation},
                       {"mass_difference", er.mass_difference},
                       {"truncation_bound", er.truncation_bound}};
  write_out(cfg, "density_report.json", j.dump(2) + "\n");
  emit(j);
  return kOk;
}

int cmd_mme(const RunConfig& cfg) {
  const SurfaceModel s = surface_from_spec(cfg.surface);
  const FundamentalDomain domain(s);
  const PhaseBox box = cfg.box.value_or(default_box());
  const Ball ball = enumerate_ball(s, cfg.radius.value_or(13.0));
  const BoundaryMeasure density = ps_density(ball, DiskPoint::origin(), 1.05, 6.0);
  const KnieperMeasure m(domain, density);
  const MeasureEstimate k = knieper_measure(m, box, cfg.samples, cfg.seed);
  const MeasureEstimate l = liouville_measure(domain, box, cfg.samples, cfg.seed + 1);
  write_out(cfg, "mme.json", measure_report_json(box, k, cfg.seed));

  std::mt19937_64 rng = chunk_rng(cfg.seed, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto point = [&] { return DiskPoint(std::polar(0.5 * std::sqrt(u(rng)), kTwoPi * u(rng))); };
  double expansion = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ExpansionReport r = verify_expansion(PhasePoint(point(), kTwoPi * u(rng)), PhasePoint(point(), kTwoPi * u(rng)),
                                               {-3.0, -1.0, 0.0, 2.0, 5.0, 7.0}, s.entropy_h());
    expansion = std::max({expansion, r.max_unstable_error, r.max_stable_error});
  }
  json j;
  j["command"] = "mme";
  j["box"] = format_box(box);
  j["knieper"] = {{"estimate", k.value}, {"std_error", k.std_error}, {"samples", k.samples}, {"discarded", k.discarded}};
  j["liouville"] = {{"estimate", l.value}, {"std_error", l.std_error}};
  j["relative_difference"] = k.value / l.value - 1.0;
  j["normalization"] = m.normalization();
  j["max_expansion_error"] = expansion;
  emit(j);
  return kOk;
}

int cmd_cube(const RunConfig& cfg, const std::optional<PhaseBox>& box2) {
  const SurfaceModel s = surface_from_spec(cfg.surface);
  const FundamentalDomain domain(s);
  const PhaseBox b1 = cfg.box.value_or(default_box());
  const PhaseBox b2 = box2.value_or(default_box2());
  const MeasureEstimate m1 = liouville_measure(domain, b1, cfg.samples, cfg.seed);
  const MeasureEstimate m2 = liouville_measure(domain, b2, cfg.samples, cfg.seed + 1);
  const double r = cfg.radius.value_or(max_t(cfg) + cfg.epsilon);
  const CachedSpectrum c = spectrum_for(cfg, s, r);
  const OrbitCatalog catalog(domain, c.table, max_t(cfg), 0.01);
  json j;
  j["command"] = "cube";
  j["box1"] = format_box(b1);
  j["box2"] = format_box(b2);
  j["m1"] = m1.value;
  j["m2"] = m2.value;
  j["product"] = m1.value * m2.value;
  json rows = json::array();
  std::uint64_t k = 2;
  for (double t : cfg.t_grid) {
    const MeasureEstimate corr = mixing_correlation(domain, b1, b2, t, cfg.samples, cfg.seed + k++);
    rows.push_back({{"t", t},
                    {"correlation", corr.value},
                    {"std_error", corr.std_error},
                    {"equidistribution", catalog.equidistribution(b1, t)}});
  }
  j["rows"] = rows;
  write_out(cfg, "cube.json", j.dump(2) + "\n");
  emit(j);
  return kOk;
}

int cmd_rank(const RunConfig& cfg, int geodesics, const std::string& dump) {
  std::mt19937_64 rng = chunk_rng(cfg.seed, 14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  json j;
  j["command"] = "rank";
  j["horizon"] = 30.0;
  json presets = json::array();
  int disagreements = 0;
  for (MetricPreset p : {MetricPreset::flat, MetricPreset::strictly_negative, MetricPreset::flat_strip,
                         MetricPreset::constant_m1}) {
    const ConformalMetric m = ConformalMetric::preset(p);
    int rank_one = 0, bad = 0;
    for (int i = 0; i < geodesics; ++i) {
      GeodesicState st{-1.5 + 3.0 * u(rng), -1.5 + 3.0 * u(rng), kTwoPi * u(rng), 0.0};
      if (p == MetricPreset::constant_m1) st.y = 0.2 + 2.0 * u(rng);
      if (p == MetricPreset::flat_strip && i % 10 == 0) st = {st.x / 2.0, st.y, std::numbers::pi / 2.0, 0.0};
      const bool regular = rank_classify(m, st).rank == Rank::rank_one;
      rank_one += regular ? 1 : 0;
      bad += (riccati_subspaces(m, st).gap > 1e-6) != regular ? 1 : 0;
    }
    disagreements += bad;
    presets.push_back({{"preset", to_string(p)},
                       {"geodesics", geodesics},
                       {"rank_one", rank_one},
                       {"disagreements", bad},
                       {"max_curvature_on_grid", m.max_curvature_on_grid(-3.0, 3.0, 0.05, 3.0, 41)}});
  }
  j["presets"] = presets;
  j["disagreements"] = disagreements;
  if (!dump.empty()) {
    // preset:x,y,theta
    const auto colon = dump.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::config, "--dump expects preset:x,y,theta");
    const ConformalMetric m = ConformalMetric::preset(parse_metric_preset(dump.substr(0, colon)));
    const std::vector<double> v = parse_double_list("dump", dump.substr(colon + 1));
    if (v.size() != 3) throw Error(ErrorKind::config, "--dump expects preset:x,y,theta");
    write_out(cfg, "trajectory.csv", trajectory_csv(riccati_trajectory(m, {v[0], v[1], v[2], 0.0})));
    j["trajectory"] = (cfg.out / "trajectory.csv").string();
  }
  emit(j);
  return disagreements == 0 ? kOk : kAcceptance;
}

int cmd_verify(const RunConfig& cfg) {
  BatteryOptions opt;
  opt.seed = cfg.seed;
  opt.tolerances = cfg.tolerances();
  opt.spectrum = [&](const SurfaceModel& s, double cutoff) { return spectrum_for(cfg, s, cutoff).table; };
  opt.progress = [](const CriterionResult& r, double secs) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << " (" << static_cast<int>(secs + 0.5)
              << " s)\n";
  };
  const BatteryReport rep = run_battery(opt);
  write_out(cfg, "verify_report.txt", rep.text());
  write_out(cfg, "verify_report.json", rep.json());
  std::cout << rep.text();
  return rep.all_passed() ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic flow experiments on compact hyperbolic surfaces"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, surface, t_list, box, box2, out, cache_dir, profile, dump;
  double radius = 0.0, epsilon = 0.0, exponent = 1.05;
  long long samples = 0, seed = 0;
  int bins = 48, geodesics = 100;
  app.add_option("--config", config_path, "flat key = value config file");
  auto* o_surface = app.add_option("--surface", surface, "preset name (bolza) or surface file");
  auto* o_radius = app.add_option("--radius", radius, "length cutoff / ball radius");
  auto* o_t = app.add_option("--t", t_list, "comma separated t grid");
  auto* o_eps = app.add_option("--epsilon", epsilon, "window half-width");
  auto* o_samples = app.add_option("--samples", samples, "Monte Carlo samples");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_box = app.add_option("--box", box, "phase box x,y,theta,r,alpha");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_cache = app.add_option("--cache-dir", cache_dir, "spectrum cache directory (env GEOFLOW_CACHE_DIR)");
  auto* o_profile = app.add_option("--tolerance-profile", profile, "standard or strict");

  app.add_subcommand("spectrum", "build or load the cached length spectrum");
  app.add_subcommand("count", "counting laws on the spectrum");
  auto* density = app.add_subcommand("density", "Patterson-Sullivan density checks");
  density->add_option("--exponent", exponent, "Poincare series exponent s");
  density->add_option("--bins", bins, "angular bins");
  app.add_subcommand("mme", "measure of maximal entropy on a box");
  auto* cube = app.add_subcommand("cube", "mixing and equidistribution on boxes");
  cube->add_option("--box2", box2, "second box for mixing");
  auto* rank = app.add_subcommand("rank", "rank dichotomy on the conformal presets");
  rank->add_option("--geodesics", geodesics, "random geodesics per preset");
  rank->add_option("--dump", dump, "write trajectory.csv for preset:x,y,theta");
  app.add_subcommand("verify-all", "run the full acceptance battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", e.what(), kConfig);
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config(cfg, parse_key_values(read_text_file(config_path)));
    if (const char* env = std::getenv("GEOFLOW_CACHE_DIR"); env && *env) cfg.cache_dir = env;
    if (*o_surface) cfg.surface = surface;
    if (*o_radius) cfg.radius = radius;
    if (*o_t) cfg.t_grid = parse_double_list("t", t_list);
    if (*o_eps) cfg.epsilon = epsilon;
    if (*o_samples) {
      if (samples <= 0) throw Error(ErrorKind::config, "samples must be positive");
      cfg.samples = static_cast<std::size_t>(samples);
    }
    if (*o_seed) {
      if (seed < 0) throw Error(ErrorKind::config, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (*o_box) cfg.box = parse_box(box);
    if (*o_out) cfg.out = out;
    if (*o_cache) cfg.cache_dir = cache_dir;
    if (*o_profile) cfg.tolerance_profile = profile;
    const std::string name = app.get_subcommands().front()->get_name();
    cfg.validate(name == "count" || name == "cube");
    (void)cfg.tolerances();

    if (name == "spectrum") return cmd_spectrum(cfg);
    if (name == "count") return cmd_count(cfg);
    if (name == "density") {
      if (!(exponent > 0.0) || bins <= 0) throw Error(ErrorKind::config, "exponent and bins must be positive");
      return cmd_density(cfg, exponent, bins);
    }
    if (name == "mme") return cmd_mme(cfg);
    if (name == "cube") return cmd_cube(cfg, box2.empty() ? std::nullopt : std::optional<PhaseBox>(parse_box(box2)));
    if (name == "rank") {
      if (geodesics <= 0) throw Error(ErrorKind::config, "geodesics must be positive");
      return cmd_rank(cfg, geodesics, dump);
    }
    return cmd_verify(cfg);
  } catch (const Error& e) {
    return report_error(to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kNumeric);
  }
}
