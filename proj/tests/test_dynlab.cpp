#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geoflow/dynlab/dynlab.hpp"
#include "geoflow/error.hpp"

using namespace geoflow;

namespace {

struct Fixture {
  SurfaceModel surface = bolza_surface();
  FundamentalDomain domain{surface};
  SpectrumTable table = build_spectrum(surface, 9.5);
  OrbitCatalog catalog{domain, table, 9.5, 0.01};
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

const PhaseBox& full_box() {
  static const PhaseBox b(PhasePoint(DiskPoint::origin(), 0.0), 2.5, std::numbers::pi);
  return b;
}

bool same_phase(const PhasePoint& a, const PhasePoint& b, double tol) {
  return std::abs(a.base.z() - b.base.z()) < tol && std::abs(angle_difference(a.dir, b.dir)) < tol;
}

// Points on the sides of F have a second representative across a side pairing.
bool same_in_quotient(const PhasePoint& a, const PhasePoint& b, double tol) {
  if (same_phase(a, b, tol)) return true;
  for (const auto& g : fx().domain.test_set()) {
    if (same_phase(apply_phase(g, a), b, tol)) return true;
  }
  return false;
}

GridSamples grid(const std::vector<double>& ts, const std::vector<double>& eps,
                 double (*fn)(double t, double e)) {
  GridSamples g{ts, eps, {}};
  for (double t : ts) {
    std::vector<double> row;
    for (double e : eps) row.push_back(fn(t, e));
    g.values.push_back(row);
  }
  return g;
}

}  // namespace

TEST_CASE("quotient reduction and flow") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint v(DiskPoint(std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng))), kTwoPi * u(rng));
    const auto [w, g] = reduce_to_F(fx().domain, v);
    CHECK(fx().domain.contains(w.base));
    CHECK(dist_from_origin(w.base) <= fx().surface.domain_diameter() + 1e-9);
    CHECK(same_phase(apply_phase(g, v), w, 1e-9));
    CHECK(same_phase(reduce_to_F(fx().domain, w).first, w, 1e-12));

    const double t = 6.0 * u(rng);
    const PhasePoint direct = fx().domain.reduce(flow(w, t)).phase;
    CHECK(same_in_quotient(flow_in_quotient(fx().domain, w, t), direct, 1e-7));
    // Long flows stay in F.
    CHECK(fx().domain.contains(flow_in_quotient(fx().domain, w, 40.0 * u(rng)).base));
  }
}

TEST_CASE("realized systole geodesic") {
  const GeodesicClass& c = fx().table.rows().front();
  REQUIRE(c.length == doctest::Approx(3.057141838961996).epsilon(1e-9));
  const RealizedGeodesic g = realize_geodesic(fx().domain, c, 0.01);
  CHECK(g.samples.size() == static_cast<std::size_t>(std::ceil(c.length / 0.01)));
  for (const auto& s : g.samples) CHECK(fx().domain.contains(s.base));
  double covered = 0.0;
  for (const auto& seg : g.segments) covered += seg.length;
  CHECK(covered == doctest::Approx(c.length).epsilon(1e-7));
  CHECK(std::abs(arclength_in_box(g, full_box(), 0.01) - c.length) < 0.01);
  // Periodicity: every sample returns to itself after one period.
  for (std::size_t k = 0; k < g.samples.size(); k += 37) {
    CHECK(same_in_quotient(flow_in_quotient(fx().domain, g.samples[k], c.length), g.samples[k], 1e-6));
  }
}

TEST_CASE("every class up to length 8 is realized periodically") {
  for (const auto& row : fx().table.rows()) {
    if (row.length > 8.0) break;
    const RealizedGeodesic g = realize_geodesic(fx().domain, row, 0.05);
    CHECK(same_in_quotient(fx().domain.reduce(g.at(row.length)).phase, g.samples.front(), 1e-6));
  }
}

TEST_CASE("equidistribution statistic") {
  const OrbitCatalog& cat = fx().catalog;
  CHECK(cat.equidistribution(full_box(), 9.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(cat.equidistribution(full_box(), 3.0), Error);
  // Just above the systole only the systole classes enter.
  const PhaseBox b(PhasePoint(DiskPoint(Complex(0.1, 0.05)), 0.3), 0.6, 1.0);
  double sum = 0.0;
  int n = 0;
  for (const auto& row : fx().table.rows()) {
    if (row.length > 3.1) break;
    if (!row.primitive) continue;
    const RealizedGeodesic g = realize_geodesic(fx().domain, row, 0.01);
    sum += arclength_in_box(g, b, 0.01) / g.length;
    ++n;
  }
  REQUIRE(n > 0);
  CHECK(cat.equidistribution(b, 3.1) == doctest::Approx(sum / n).epsilon(1e-12));
  CHECK(equidistribution_stat(fx().domain, fx().table, b, 3.1, 0.01) == doctest::Approx(sum / n).epsilon(1e-12));
}

TEST_CASE("crossing records") {
  const OrbitCatalog& cat = fx().catalog;
  const PhaseBox b(PhasePoint(DiskPoint(Complex(-0.2, 0.1)), 2.0), 0.6, 1.0);
  const RealizedGeodesic& g = cat.orbits().back();
  const CrossingRecord full = crossing_record(g, {full_box(), b}, 0.5);
  CHECK(full.cells == static_cast<std::size_t>(std::ceil(g.length / 0.5)));
  CHECK(full.counts[0] == full.cells);
  CHECK(full.counts[1] <= full.cells);
  // Mean over the length window by direct aggregation.
  double sum = 0.0;
  int n = 0;
  for (const auto& o : cat.orbits()) {
    if (o.length > 8.5 && o.length <= 9.5) {
      sum += static_cast<double>(crossing_record(o, {b}, 0.5).counts[0]);
      ++n;
    }
  }
  const MeasureEstimate m = cat.mean_crossings(b, 9.0, 0.5);
  CHECK(m.samples == static_cast<std::size_t>(n));
  CHECK(m.value == doctest::Approx(sum / n).epsilon(1e-12));
  CHECK_THROWS_AS(crossing_record(g, {b}, 0.0), Error);
}

TEST_CASE("mixing correlation against box measures") {
  const PhaseBox b1(PhasePoint(DiskPoint(Complex(0.1, 0.05)), 0.3), 0.5, 0.9);
  const MeasureEstimate m1 = liouville_measure(fx().domain, b1, 200'000, 5);
  const MeasureEstimate whole = mixing_correlation(fx().domain, b1, full_box(), 7.0, 100'000, 6);
  CHECK(std::abs(whole.value - m1.value) <= 3.0 * std::hypot(whole.std_error, m1.std_error) + 1e-12);
  const MeasureEstimate same = mixing_correlation(fx().domain, b1, b1, 0.0, 100'000, 7);
  CHECK(std::abs(same.value - m1.value) <= 3.0 * std::hypot(same.std_error, m1.std_error) + 1e-12);
  const MeasureEstimate again = mixing_correlation(fx().domain, b1, b1, 0.0, 100'000, 7);
  CHECK(again.value == same.value);
}

TEST_CASE("asymptotic comparison on constructed samples") {
  const std::vector<double> ts{6.0, 8.0, 10.0, 12.0}, eps{0.1, 0.25, 0.5};
  const GridSamples g = grid(ts, eps, [](double t, double) { return std::exp(t) / t; });

  const AsymptoticReport same = asym_compare(g, g, 0.1);
  CHECK(same.passed);
  CHECK(same.K == 0.0);
  for (double m : same.margins) CHECK(m == doctest::Approx(0.1));

  const GridSamples f2 = grid(ts, eps, [](double t, double e) { return std::exp(t) / t * std::exp(2.0 * e); });
  const AsymptoticReport bow = asym_compare(f2, g, 0.0, AsymptoticRelation::bowtie);
  CHECK(bow.passed);
  CHECK(bow.K == doctest::Approx(2.0).epsilon(1e-9));

  const GridSamples f3 = grid(ts, eps, [](double t, double) { return std::exp(t) / t * std::exp(0.1 * t); });
  CHECK_FALSE(asym_compare(f3, g, 0.1).passed);
  CHECK_FALSE(asym_compare(f3, g, 0.1, AsymptoticRelation::sim).passed);
  CHECK(asym_compare(f3, g, 0.1).quantifier_template.find("finite-grid surrogate") != std::string::npos);

  GridSamples bad = g;
  bad.values[1][2] = 0.0;
  try {
    asym_compare(bad, g, 0.1);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
  GridSamples shifted = g;
  shifted.t_grid[0] = 5.0;
  CHECK_THROWS_AS(asym_compare(shifted, g, 0.1), Error);
  CHECK(asymptotic_report_json(same).find("\"quantifier_template\"") != std::string::npos);
}

TEST_CASE("counting suite rows") {
  const PhaseBox b(PhasePoint(DiskPoint(Complex(0.1, 0.05)), 0.3), 0.6, 1.0);
  const CountingBox cb{b, liouville_measure(fx().domain, b, 100'000, 8)};
  const CountingSuiteReport r = counting_suite(fx().table, {2.0, 8.0, 9.0}, 0.5, 1.0, &cb, &fx().catalog);
  // No crossings row at t = 2: there is no orbit to average over.
  REQUIRE(r.rows.size() == 11);
  // Below the systole there are no classes; the row is still reported.
  CHECK(r.rows[1].law == "cumulative");
  CHECK(r.rows[1].observed == 0.0);
  for (const auto& row : r.rows) {
    if (row.law == "window") CHECK(row.observed == double(fx().table.count_window(row.t, 0.5, true)));
    if (row.law == "cumulative") {
      CHECK(row.observed == double(fx().table.count_P(row.t, true)));
      CHECK(row.predicted == doctest::Approx(std::exp(row.t) / row.t));
    }
  }
  // The implied N row is the window row rescaled.
  CHECK(r.rows[5].law == "implied_N");
  CHECK(r.rows[5].ratio == doctest::Approx(r.rows[3].ratio).epsilon(1e-12));
  CHECK(r.rows[6].law == "crossings");
  CHECK(counting_csv(r).rfind("law,t,observed,predicted,ratio,std_error\n", 0) == 0);
  CHECK_THROWS_AS(counting_suite(fx().table, {9.3}, 0.5, 1.0), Error);
}
