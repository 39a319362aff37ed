#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "geoflow/density/density.hpp"
#include "geoflow/error.hpp"

using namespace geoflow;

namespace {

const SurfaceModel& bolza() {
  static const SurfaceModel s = bolza_surface();
  return s;
}

const Ball& ball13() {
  static const Ball b = enumerate_ball(bolza(), 13.0);
  return b;
}

// Poisson kernel written out directly: (1 - |z|^2) / |z - xi|^2.
double poisson(std::complex<double> z, double angle) {
  return (1.0 - std::norm(z)) / std::norm(z - std::polar(1.0, angle));
}

}  // namespace

TEST_CASE("series at small radius and zero exponent") {
  const Ball& b = ball13();
  const DiskPoint p(Complex(0.2, -0.1));
  CHECK(poincare_series(b, 1.05, p, 0.0) == doctest::Approx(std::exp(-1.05 * dist(p, DiskPoint::origin()))));
  CHECK(poincare_series(b, 0.0, p, 9.0) == doctest::Approx(static_cast<double>(b.count_within(9.0))));
}

TEST_CASE("series is monotone in s and R") {
  const Ball& b = ball13();
  const DiskPoint o = DiskPoint::origin();
  double prev = 0.0;
  for (double r = 4.0; r <= 13.0; r += 1.0) {
    const double v = poincare_series(b, 1.05, o, r);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(poincare_series(b, 1.3, o) < poincare_series(b, 1.05, o));
  CHECK(poincare_series(b, 1.05, o) < poincare_series(b, 0.9, o));
}

TEST_CASE("series increments bracket the critical exponent") {
  const Ball b = ball13().restricted(12.0);
  const DiskPoint o = DiskPoint::origin();
  for (double s : {1.3, 0.9}) {
    double prev_inc = 0.0;
    // Shells of width 2: displacements cluster, so unit shells are too lumpy.
    for (int r = 8; r <= 12; r += 2) {
      const double inc = poincare_series(b, s, o, r) - poincare_series(b, s, o, r - 2);
      if (r > 8) {
        if (s > 1.0)
          CHECK(inc < prev_inc);
        else
          CHECK(inc > prev_inc);
      }
      prev_inc = inc;
    }
  }
}

TEST_CASE("growth exponent close to one") {
  const double slope = growth_exponent(ball13(), 9.0, 13.0);
  CHECK(slope >= 0.9);
  CHECK(slope <= 1.1);
}

TEST_CASE("density mass equals series without the identity term") {
  const Ball b = ball13().restricted(10.0);
  for (const DiskPoint p : {DiskPoint::origin(), DiskPoint(Complex(0.3, 0.2))}) {
    const BoundaryMeasure mu = ps_density(b, p, 1.05);
    const double expected = poincare_series(b, 1.05, p) - std::exp(-1.05 * dist(p, DiskPoint::origin()));
    CHECK(mu.total_mass() == doctest::Approx(expected).epsilon(1e-12));
    for (const Atom& a : mu.atoms()) CHECK(a.weight > 0.0);
  }
}

TEST_CASE("density atoms lie on the rays through orbit points") {
  const Ball b = ball13().restricted(7.0);
  const DiskPoint p(Complex(-0.25, 0.4));
  const BoundaryMeasure mu = ps_density(b, p, 1.05);
  REQUIRE(mu.atoms().size() == b.size() - 1);
  for (std::size_t i = 1; i < b.size(); ++i) {
    const std::complex<double> x = apply(b.elements()[i].matrix, DiskPoint::origin()).z();
    const std::complex<double> xi = mu.atoms()[i - 1].point.u();
    // p, x and xi lie on one geodesic: the Mobius map sending p to 0 makes them collinear with 0.
    const auto to0 = [&](std::complex<double> z) { return (z - p.z()) / (1.0 - std::conj(p.z()) * z); };
    CHECK(std::abs(std::arg(to0(x) / to0(xi))) < 1e-9);
  }
}

TEST_CASE("density mirror symmetry at the origin") {
  const BoundaryMeasure mu = ps_density(ball13().restricted(12.0), DiskPoint::origin(), 1.05);
  const AngularBins bins = AngularBins::centered(64);
  const auto m = mu.binned(bins);
  // Reflection in the real axis maps bin k (centred at k w) to bin -k; rotation by pi/4 shifts by 8.
  for (int k = 0; k < 64; ++k) {
    CHECK(m[k] == doctest::Approx(m[(64 - k) % 64]).epsilon(1e-9));
    CHECK(m[k] == doctest::Approx(m[(k + 8) % 64]).epsilon(1e-9));
  }
}

TEST_CASE("empty ball gives a degenerate measure") {
  const Ball b = ball13().restricted(1.0);
  REQUIRE(b.size() == 1);
  try {
    ps_density(b, DiskPoint::origin(), 1.05);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_measure);
  }
}

TEST_CASE("transformation law identities") {
  const Ball b = ball13().restricted(10.0);
  const DiskPoint p = DiskPoint::origin(), q(Complex(0.3, 0.0));
  const BoundaryMeasure mp = ps_density(b, p, 1.05), mq = ps_density(b, q, 1.05);
  const AngularBins bins = AngularBins::centered(48);
  CHECK(check_transformation(mp, mp, 1.0, bins).max_relative_deviation == 0.0);
  const auto pq = check_transformation(mp, mq, 1.0, bins);
  const auto qp = check_transformation(mq, mp, 1.0, bins);
  for (int k = 0; k < 48; ++k) {
    if (!pq.bins[k].included || !qp.bins[k].included) continue;
    CHECK(std::abs(pq.bins[k].ratio * qp.bins[k].ratio - 1.0) < 1e-12);
    CHECK(std::abs(pq.bins[k].expected * qp.bins[k].expected - 1.0) < 1e-12);
  }
}

TEST_CASE("transformation law against the Poisson kernel") {
  const DiskPoint p = DiskPoint::origin(), q(Complex(0.3, 0.0));
  const AngularBins bins = AngularBins::centered(48);
  double prev = 0.0;
  for (double r : {11.0, 12.0, 13.0}) {
    const Ball b = ball13().restricted(r);
    const auto rep = check_transformation(ps_density(b, p, 1.05), ps_density(b, q, 1.05), 1.0, bins);
    CHECK(rep.bins_used >= 36);
    double worst = 0.0;
    for (const BinComparison& c : rep.bins) {
      const double law = poisson(p.z(), c.center) / poisson(q.z(), c.center);
      CHECK(c.expected == doctest::Approx(law).epsilon(1e-12));
      if (c.included) worst = std::max(worst, std::abs(c.mass_p / c.mass_q / law - 1.0));
    }
    CHECK(worst == doctest::Approx(rep.max_relative_deviation));
    CHECK(worst < 0.05);
    if (prev > 0.0) CHECK(std::abs(worst - prev) < 0.01);
    prev = worst;
  }
}

TEST_CASE("equivariance") {
  const SurfaceModel& s = bolza();
  const Isometry g = s.letter(0);
  const double r = 12.0;
  const Ball big = enumerate_ball(s, r + displacement(g) + 1e-6);
  const AngularBins bins = AngularBins::centered(48);
  CHECK(check_equivariance(big, Isometry::identity(), DiskPoint::origin(), 1.05, r, bins).max_relative_deviation ==
        0.0);
  const auto rep = check_equivariance(big, g, DiskPoint::origin(), 1.05, r, bins);
  CHECK(rep.bins_used == 48);
  CHECK(rep.max_relative_deviation < 0.05);
  CHECK(rep.mass_difference <= rep.truncation_bound);
  CHECK_THROWS_AS(check_equivariance(ball13(), g, DiskPoint::origin(), 1.05, r, bins), Error);
}

TEST_CASE("density export") {
  const BoundaryMeasure mu = ps_density(ball13().restricted(8.0), DiskPoint::origin(), 1.05);
  const AngularBins bins = AngularBins::centered(16);
  std::istringstream in(density_csv(mu, bins));
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin_center_angle,mass");
  int rows = 0;
  double total = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    total += std::stod(line.substr(line.find(',') + 1));
  }
  CHECK(rows == 16);
  CHECK(total == doctest::Approx(mu.total_mass()));
  CHECK(density_metadata_json(mu, bins).find("\"bins\": 16") != std::string::npos);
}
