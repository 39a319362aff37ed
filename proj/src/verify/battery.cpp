#include "geoflow/verify/battery.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "geoflow/density/density.hpp"
#include "geoflow/dynlab/dynlab.hpp"
#include "geoflow/error.hpp"
#include "geoflow/fuchsian/ball.hpp"
#include "geoflow/io.hpp"
#include "geoflow/jacobi/jacobi.hpp"
#include "geoflow/mme/mme.hpp"
#include "geoflow/random.hpp"

namespace geoflow {

namespace {

constexpr int kCriteria = 14;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::uint64_t derive(std::uint64_t seed, int id, int k) {
  return seed * 1'000'003ULL + static_cast<std::uint64_t>(id) * 1009ULL + static_cast<std::uint64_t>(k);
}

// Heavy inputs shared between criteria of one run, built on first use.
class Context {
 public:
  explicit Context(const BatteryOptions& o) : opt(o), surface(bolza_surface()), domain(surface) {}

  const BatteryOptions& opt;
  SurfaceModel surface;
  FundamentalDomain domain;

  const Ball& ball13() {
    if (!ball13_) ball13_ = enumerate_ball(surface, 13.0);
    return *ball13_;
  }
  const SpectrumTable& spectrum() {
    if (!spectrum_) spectrum_ = opt.spectrum ? opt.spectrum(surface, 12.5) : build_spectrum(surface, 12.5);
    return *spectrum_;
  }
  const OrbitCatalog& catalog() {
    if (!catalog_) catalog_ = std::make_unique<OrbitCatalog>(domain, spectrum(), 12.5, 0.01);
    return *catalog_;
  }
  const KnieperMeasure& knieper() {
    if (!knieper_) {
      mme_density_ = std::make_unique<BoundaryMeasure>(ps_density(ball13(), DiskPoint::origin(), 1.05, 6.0));
      knieper_ = std::make_unique<KnieperMeasure>(domain, *mme_density_);
    }
    return *knieper_;
  }
  const BoundaryMeasure& full_density() {
    if (!full_density_) full_density_ = std::make_unique<BoundaryMeasure>(ps_density(ball13(), DiskPoint::origin(), 1.05));
    return *full_density_;
  }
  // Knieper measures of the equidistribution boxes, shared with the crossings criterion.
  const std::vector<MeasureEstimate>& box_measures() {
    if (box_measures_.empty()) {
      int k = 0;
      for (const auto& b : equidistribution_boxes())
        box_measures_.push_back(knieper_measure(knieper(), b, 1'000'000, derive(opt.seed, 10, k++)));
    }
    return box_measures_;
  }
  static std::vector<PhaseBox> equidistribution_boxes() {
    return {PhaseBox(PhasePoint(DiskPoint(Complex(0.1, 0.05)), 0.3), 0.6, 1.0),
            PhaseBox(PhasePoint(DiskPoint(Complex(-0.2, 0.1)), 2.0), 0.6, 1.0),
            PhaseBox(PhasePoint(DiskPoint(Complex(0.0, -0.25)), 4.0), 0.6, 1.0),
            PhaseBox(PhasePoint(DiskPoint(Complex(0.3, 0.0)), -1.0), 0.6, 1.0),
            PhaseBox(PhasePoint(DiskPoint(Complex(-0.1, -0.2)), 5.5), 0.6, 1.0)};
  }
  const CountingSuiteReport& counting() {
    if (!counting_) counting_ = counting_suite(spectrum(), {8.0, 10.0, 12.0}, 0.5, surface.entropy_h());
    return *counting_;
  }

 private:
  std::optional<Ball> ball13_;
  std::optional<SpectrumTable> spectrum_;
  std::unique_ptr<OrbitCatalog> catalog_;
  std::unique_ptr<BoundaryMeasure> mme_density_;
  std::unique_ptr<KnieperMeasure> knieper_;
  std::unique_ptr<BoundaryMeasure> full_density_;
  std::vector<MeasureEstimate> box_measures_;
  std::optional<CountingSuiteReport> counting_;
};

DiskPoint uniform_disk_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return DiskPoint(std::polar(r * std::sqrt(u(rng)), kTwoPi * u(rng)));
}

CriterionResult group_sanity(Context& c) {
  const ToleranceProfile& tol = c.opt.tolerances;
  const Isometry r = c.surface.evaluate(c.surface.relator());
  const double sign = r.a().real() >= 0.0 ? 1.0 : -1.0;
  const double residual = std::max(std::abs(r.a() - sign), std::abs(r.b()));
  const double expected = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  double worst = 0.0;
  bool hyperbolic = true;
  for (const auto& g : c.surface.letters()) {
    const TraceClass tc = trace_class(g);
    hyperbolic = hyperbolic && tc.type == IsometryType::hyperbolic;
    worst = std::max(worst, std::abs(tc.translation_length - expected));
  }
  return {1, "", residual < tol.relator && hyperbolic && worst < tol.generator_length,
          "relator residual " + num(residual) + ", " + std::to_string(c.surface.letter_count()) +
              " generators hyperbolic: " + (hyperbolic ? "yes" : "no") + ", max |length - " + num(expected) +
              "| " + num(worst)};
}

CriterionResult enumeration(Context& c) {
  const Ball pruned = enumerate_ball(c.surface, 6.0);
  const Ball brute = brute_force_ball(c.surface, 6.0, 8);
  IsometryIndex index;
  for (std::size_t i = 0; i < pruned.size(); ++i) index.insert(pruned.elements()[i].matrix, static_cast<std::int64_t>(i));
  std::size_t missing = 0;
  for (const auto& e : brute.elements()) missing += index.find(e.matrix) < 0 ? 1 : 0;
  const bool ok = missing == 0 && pruned.size() == brute.size();
  return {2, "", ok,
          "pruned " + std::to_string(pruned.size()) + " elements, brute force " + std::to_string(brute.size()) +
              ", brute-force elements missing from pruned " + std::to_string(missing)};
}

CriterionResult conjugacy(Context& c) {
  constexpr double kLimit = 8.0;
  std::size_t rows = 0;
  try {
    SpectrumOptions o;
    o.crossval_limit = kLimit;
    rows = build_spectrum(c.surface, kLimit, o).rows().size();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::spectrum_inconsistency) throw;
    return {3, "", false, std::string("cross-validation failed: ") + e.what()};
  }
  // Axis classes: cluster the axis keys of every element of length <= 8.
  const Ball ball = enumerate_ball(c.surface, kLimit + default_margin(c.surface));
  std::vector<AxisKey> keys;
  for (const auto& e : ball.elements()) {
    if (e.word.empty() || trace_class(e.matrix).translation_length > kLimit) continue;
    keys.push_back(axis_key(c.domain, e.matrix));
  }
  std::sort(keys.begin(), keys.end(), [](const AxisKey& a, const AxisKey& b) { return a.length < b.length; });
  std::vector<bool> merged(keys.size(), false);
  std::size_t clusters = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (merged[i]) continue;
    ++clusters;
    for (std::size_t j = i + 1; j < keys.size() && keys[j].length - keys[i].length <= 1e-6; ++j) {
      if (std::abs(angle_difference(keys[i].forward_angle, keys[j].forward_angle)) <= 1e-6 &&
          std::abs(angle_difference(keys[i].backward_angle, keys[j].backward_angle)) <= 1e-6)
        merged[j] = true;
    }
  }
  return {3, "", clusters == rows,
          "word classes " + std::to_string(rows) + ", axis classes " + std::to_string(clusters) + " (lengths <= 8, " +
              std::to_string(keys.size()) + " elements)"};
}

CriterionResult critical_exponent(Context& c) {
  const double slope = growth_exponent(c.ball13(), 9.0, 13.0);
  const ToleranceProfile& tol = c.opt.tolerances;
  return {4, "", slope >= tol.growth_lo && slope <= tol.growth_hi,
          "slope of ln N(R) over [9, 13] = " + num(slope) + " (band [" + num(tol.growth_lo) + ", " +
              num(tol.growth_hi) + "])"};
}

CriterionResult busemann_check(Context& c) {
  std::mt19937_64 rng = chunk_rng(c.opt.seed, 5);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const DiskPoint p = uniform_disk_point(rng, 0.9), q = uniform_disk_point(rng, 0.9);
    const BoundaryPoint xi = BoundaryPoint::from_angle(u(rng));
    const DiskPoint far = flow_base(phase_toward(p, xi), 20.0);
    worst = std::max(worst, std::abs(busemann(p, q, xi) - (dist(q, far) - dist(p, far))));
  }
  return {5, "", worst < c.opt.tolerances.busemann, "max |closed form - limit at horizon 20| = " + num(worst) +
                                                        " over 10000 triples"};
}

CriterionResult transformation(Context& c) {
  const DiskPoint p = DiskPoint::origin(), q(Complex(0.3, 0.0));
  const auto rep = check_transformation(ps_density(c.ball13(), p, 1.05), ps_density(c.ball13(), q, 1.05), 1.0,
                                        AngularBins::centered(48), 0.01);
  return {6, "", rep.max_relative_deviation < c.opt.tolerances.transformation,
          "R = 13, p = o, q = 0.3: max relative deviation " + num(rep.max_relative_deviation) + " on " +
              std::to_string(rep.bins_used) + " bins holding >= 1% of mass"};
}

CriterionResult knieper_vs_liouville(Context& c) {
  std::mt19937_64 rng = chunk_rng(c.opt.seed, 7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    DiskPoint centre = uniform_disk_point(rng, 0.75);
    while (!c.domain.contains(centre)) centre = uniform_disk_point(rng, 0.75);
    const PhaseBox b(PhasePoint(centre, kTwoPi * u(rng)), 0.3 + 0.4 * u(rng), 0.5 + u(rng));
    const MeasureEstimate km = knieper_measure(c.knieper(), b, 1'000'000, derive(c.opt.seed, 7, 2 * k));
    const MeasureEstimate lm = liouville_measure(c.domain, b, 1'000'000, derive(c.opt.seed, 7, 2 * k + 1));
    worst = std::max(worst, std::abs(km.value / lm.value - 1.0));
  }
  const MeasureEstimate area = domain_area(c.domain, 1'000'000, derive(c.opt.seed, 7, 99));
  const double area_err = std::abs(area.value / (4.0 * std::numbers::pi) - 1.0);
  const ToleranceProfile& tol = c.opt.tolerances;
  return {7, "", worst < tol.knieper && area_err < tol.area,
          "10 boxes at 1e6 samples: max |knieper / liouville - 1| = " + num(worst) + "; area(F) = " +
              num(area.value) + ", relative error " + num(area_err)};
}

CriterionResult conditionals(Context& c) {
  std::mt19937_64 rng = chunk_rng(c.opt.seed, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double expansion = 0.0;
  for (int i = 0; i < 50; ++i) {
    const PhasePoint v(uniform_disk_point(rng, 0.6), kTwoPi * u(rng));
    const PhasePoint w(uniform_disk_point(rng, 0.6), kTwoPi * u(rng));
    const ExpansionReport r = verify_expansion(v, w, {-3.0, -1.0, 0.0, 2.0, 5.0, 7.0}, 1.0);
    expansion = std::max({expansion, r.max_unstable_error, r.max_stable_error});
  }
  // Points on the horocycle through q based at xi, reached from a random start.
  const auto on_horocycle = [&](DiskPoint q, BoundaryPoint xi) {
    const DiskPoint x = uniform_disk_point(rng, 0.5);
    return flow_base(phase_toward(x, xi), std::log(poisson_kernel(q, xi) / poisson_kernel(x, xi)));
  };
  const AngularBins bins = AngularBins::centered(48);
  double holonomy = 0.0;
  for (int i = 0; i < 40; ++i) {
    const PhasePoint v1(uniform_disk_point(rng, 0.5), kTwoPi * u(rng));
    const Endpoints ev = endpoints(v1);
    const DiskPoint q = uniform_disk_point(rng, 0.5);
    const PhasePoint w1(q, phase_toward(q, ev.backward).dir + std::numbers::pi);
    const BoundaryPoint xi = endpoints(w1).forward;
    const PhasePoint w2 = phase_toward(on_horocycle(q, xi), xi);
    const PhasePoint v2 = phase_toward(on_horocycle(v1.base, ev.forward), ev.forward);
    holonomy = std::max(holonomy, verify_holonomy(v1, v2, w1, w2, c.full_density(), bins, 1.0).deviation);
  }
  const ToleranceProfile& tol = c.opt.tolerances;
  return {8, "", expansion < tol.expansion && holonomy < tol.holonomy,
          "max |ln ratio -+ h t| = " + num(expansion) + " over 50 pairs x 6 times; max holonomy deviation " +
              num(holonomy) + " over 40 configurations"};
}

CriterionResult mixing(Context& c) {
  const PhaseBox b1(PhasePoint(DiskPoint(Complex(0.1, 0.05)), 0.3), 0.5, 0.9);
  const PhaseBox b2(PhasePoint(DiskPoint(Complex(-0.2, 0.1)), 2.0), 0.5, 0.9);
  const MeasureEstimate m1 = liouville_measure(c.domain, b1, 1'000'000, derive(c.opt.seed, 9, 0));
  const MeasureEstimate m2 = liouville_measure(c.domain, b2, 1'000'000, derive(c.opt.seed, 9, 1));
  const double product = m1.value * m2.value;
  const double product_se = std::hypot(m1.std_error * m2.value, m2.std_error * m1.value);
  const MeasureEstimate c4 = mixing_correlation(c.domain, b1, b2, 4.0, 1'000'000, derive(c.opt.seed, 9, 2));
  const MeasureEstimate c12 = mixing_correlation(c.domain, b1, b2, 12.0, 1'000'000, derive(c.opt.seed, 9, 3));
  const double se = std::hypot(c12.std_error, product_se);
  const double d4 = std::abs(c4.value - product), d12 = std::abs(c12.value - product);
  return {9, "", d12 < c.opt.tolerances.mixing_sigmas * se && d12 < d4,
          "m(B1) = " + num(m1.value) + ", m(B2) = " + num(m2.value) + ", product " + num(product) + "; corr(4) = " +
              num(c4.value) + ", corr(12) = " + num(c12.value) + " +- " + num(se) + " (" + num(d12 / se) +
              " se); |corr - product| " + num(d4) + " -> " + num(d12)};
}

CriterionResult equidistribution(Context& c) {
  const auto boxes = Context::equidistribution_boxes();
  const auto& measures = c.box_measures();
  bool ok = true;
  std::ostringstream d;
  d << "relative error at t = 8 / 10 / 12:";
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    double err[3];
    int i = 0;
    for (double t : {8.0, 10.0, 12.0}) err[i++] = std::abs(c.catalog().equidistribution(boxes[k], t) / measures[k].value - 1.0);
    ok = ok && err[2] < c.opt.tolerances.equidistribution && err[2] < err[0];
    d << (k ? ";" : "") << ' ' << num(err[0]) << " / " << num(err[1]) << " / " << num(err[2]);
  }
  return {10, "", ok, d.str()};
}

std::vector<const CountingRow*> rows_of(const CountingSuiteReport& r, const std::string& law) {
  std::vector<const CountingRow*> out;
  for (const auto& row : r.rows) {
    if (row.law == law) out.push_back(&row);
  }
  return out;
}

CriterionResult window_law(Context& c) {
  const auto rows = rows_of(c.counting(), "window");
  const ToleranceProfile& tol = c.opt.tolerances;
  const double r12 = rows.back()->ratio;
  const bool ok = r12 >= tol.window_lo && r12 <= tol.window_hi && c.counting().window_approach;
  std::ostringstream d;
  d << "P_{t,0.5} t / (2 eps e^t) at t = 8 / 10 / 12: " << num(rows[0]->ratio) << " / " << num(rows[1]->ratio) << " / "
    << num(r12) << "; |ratio - 1| decreasing: " << (c.counting().window_approach ? "yes" : "no");
  return {11, "", ok, d.str()};
}

CriterionResult headline_law(Context& c) {
  const auto rows = rows_of(c.counting(), "cumulative");
  const ToleranceProfile& tol = c.opt.tolerances;
  const double r10 = rows[1]->ratio, r12 = rows[2]->ratio;
  const bool ok = r12 >= tol.headline_lo && r12 <= tol.headline_hi && std::abs(r12 - 1.0) < std::abs(r10 - 1.0);
  return {12, "", ok,
          "P_t h t / e^(h t) at t = 8 / 10 / 12: " + num(rows[0]->ratio) + " / " + num(r10) + " / " + num(r12)};
}

CriterionResult crossings(Context& c) {
  const auto boxes = Context::equidistribution_boxes();
  const auto& measures = c.box_measures();
  bool ok = true;
  std::ostringstream d;
  d << "mean crossings / (m t / eps) at t = 12, eps = 0.5:";
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const MeasureEstimate m = c.catalog().mean_crossings(boxes[k], 12.0, 0.5);
    const double ratio = m.value / (measures[k].value * 12.0 / 0.5);
    ok = ok && std::abs(ratio - 1.0) < c.opt.tolerances.crossings;
    d << (k ? "," : "") << ' ' << num(ratio);
  }
  return {13, "", ok, d.str()};
}

CriterionResult rank_suite(Context& c) {
  std::mt19937_64 rng = chunk_rng(c.opt.seed, 14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagreements = 0, total = 0;
  std::ostringstream d;
  for (MetricPreset p : {MetricPreset::flat, MetricPreset::strictly_negative, MetricPreset::flat_strip,
                         MetricPreset::constant_m1}) {
    const ConformalMetric m = ConformalMetric::preset(p);
    int regular = 0;
    for (int i = 0; i < 100; ++i) {
      GeodesicState s{-1.5 + 3.0 * u(rng), -1.5 + 3.0 * u(rng), kTwoPi * u(rng), 0.0};
      if (p == MetricPreset::constant_m1) s.y = 0.2 + 2.0 * u(rng);
      // Every tenth strip geodesic runs vertically inside the strip.
      if (p == MetricPreset::flat_strip && i % 10 == 0) s = {s.x / 2.0, s.y, std::numbers::pi / 2.0, 0.0};
      const bool rank_one = rank_classify(m, s).rank == Rank::rank_one;
      const bool gap = riccati_subspaces(m, s).gap > 1e-6;
      disagreements += rank_one != gap ? 1 : 0;
      regular += rank_one ? 1 : 0;
      ++total;
    }
    d << to_string(p) << " " << regular << "/100 rank one; ";
  }
  const ConformalMetric h = ConformalMetric::preset(MetricPreset::constant_m1);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const GeodesicState s{-2.0 + 4.0 * u(rng), 0.2 + 2.0 * u(rng), kTwoPi * u(rng), 0.0};
    const RiccatiReport r = riccati_subspaces(h, s);
    worst = std::max({worst, std::abs(r.u_unstable - 1.0), std::abs(r.u_stable + 1.0)});
  }
  d << "disagreements " << disagreements << " of " << total << "; K = -1 max |u -+ 1| = " << num(worst);
  return {14, "", disagreements == 0 && worst < c.opt.tolerances.riccati, d.str()};
}

CriterionResult run_one(int id, Context& c) {
  using Fn = CriterionResult (*)(Context&);
  static const Fn fns[kCriteria] = {group_sanity,     enumeration,  conjugacy,   critical_exponent, busemann_check,
                                    transformation,   knieper_vs_liouville, conditionals, mixing,
                                    equidistribution, window_law,   headline_law, crossings,    rank_suite};
  if (id < 1 || id > kCriteria) throw Error(ErrorKind::invalid_argument, "criterion id must lie in 1..14");
  CriterionResult r;
  try {
    r = fns[id - 1](c);
  } catch (const Error& e) {
    r = {id, "", false, std::string("error (") + to_string(e.kind()) + "): " + e.what()};
  }
  r.id = id;
  r.name = criterion_names()[static_cast<std::size_t>(id - 1)];
  return r;
}

std::vector<CriterionResult> run_all(const BatteryOptions& options, bool report_progress) {
  Context c(options);
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    const auto start = std::chrono::steady_clock::now();
    out.push_back(run_one(id, c));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (report_progress && options.progress) options.progress(out.back(), secs);
  }
  return out;
}

std::string lines(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results)
    out += std::string(r.passed ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.name + ": " + r.detail + "\n";
  return out;
}

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {
      "group sanity",          "enumeration vs brute force", "conjugacy cross-validation",
      "critical exponent",     "busemann limit",             "transformation law",
      "knieper vs liouville",  "conditional laws",           "mixing",
      "equidistribution",      "window counting law",        "headline counting law",
      "per-geodesic crossings", "rank dichotomy",            "determinism"};
  return names;
}

ToleranceProfile ToleranceProfile::named(const std::string& name) {
  ToleranceProfile p;
  if (name == "standard") return p;
  if (name != "strict") throw Error(ErrorKind::config, "unknown tolerance profile '" + name + "'");
  p.name = "strict";
  for (double* x : {&p.relator, &p.generator_length, &p.busemann, &p.transformation, &p.knieper, &p.area,
                    &p.expansion, &p.holonomy, &p.equidistribution, &p.crossings, &p.riccati})
    *x /= 2.0;
  p.mixing_sigmas = 2.0;
  p.growth_lo = 0.95, p.growth_hi = 1.05;
  p.window_lo = 0.9, p.window_hi = 1.15;
  p.headline_lo = 0.925, p.headline_hi = 1.125;
  return p;
}

void ToleranceProfile::apply_overrides(const KeyValues& kv) {
  const std::pair<const char*, double*> fields[] = {
      {"relator", &relator},         {"generator_length", &generator_length},
      {"growth_lo", &growth_lo},     {"growth_hi", &growth_hi},
      {"busemann", &busemann},       {"transformation", &transformation},
      {"knieper", &knieper},         {"area", &area},
      {"expansion", &expansion},     {"holonomy", &holonomy},
      {"mixing_sigmas", &mixing_sigmas}, {"equidistribution", &equidistribution},
      {"window_lo", &window_lo},     {"window_hi", &window_hi},
      {"headline_lo", &headline_lo}, {"headline_hi", &headline_hi},
      {"crossings", &crossings},     {"riccati", &riccati}};
  bool changed = false;
  for (const auto& [key, value] : kv) {
    if (key.rfind("tol.", 0) != 0) continue;
    const std::string field = key.substr(4);
    bool known = false;
    for (const auto& [n, ptr] : fields) {
      if (field == n) {
        *ptr = parse_double(key, value);
        known = changed = true;
      }
    }
    if (!known) throw Error(ErrorKind::config, "unknown tolerance key '" + key + "'");
  }
  if (changed) name += "+overrides";
}

bool BatteryReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

std::string BatteryReport::text() const {
  return "seed " + std::to_string(seed) + ", tolerance profile " + profile + "\n" + lines(results);
}

std::string BatteryReport::json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["tolerance_profile"] = profile;
  j["all_passed"] = all_passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : results) arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  j["criteria"] = arr;
  return j.dump(2) + "\n";
}

CriterionResult run_criterion(int id, const BatteryOptions& options) {
  Context c(options);
  return run_one(id, c);
}

BatteryReport run_battery(const BatteryOptions& options) {
  BatteryReport rep;
  rep.seed = options.seed;
  rep.profile = options.tolerances.name;
  rep.results = run_all(options, true);
  const auto start = std::chrono::steady_clock::now();
  const std::string first = lines(rep.results);
  const std::string second = lines(run_all(options, false));
  CriterionResult det{15, criterion_names()[14], first == second,
                      "criteria 1-14 rerun with seed " + std::to_string(options.seed) + ": sha256 " +
                          sha256_hex(first).substr(0, 16) + " vs " + sha256_hex(second).substr(0, 16)};
  rep.results.push_back(det);
  if (options.progress)
    options.progress(det, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return rep;
}

}  // namespace geoflow
