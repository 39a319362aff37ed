#include <doctest.h>

#include <cmath>
#include <random>

#include "geoflow/error.hpp"
#include "geoflow/jacobi/jacobi.hpp"

using namespace geoflow;

namespace {

const MetricPreset kPresets[] = {MetricPreset::flat, MetricPreset::strictly_negative, MetricPreset::flat_strip,
                                 MetricPreset::constant_m1};

GeodesicState random_start(MetricPreset p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = 2.0 * M_PI * u(rng);
  if (p == MetricPreset::constant_m1) return {-2.0 + 4.0 * u(rng), 0.2 + 2.0 * u(rng), theta, 0.0};
  return {-1.5 + 3.0 * u(rng), -1.5 + 3.0 * u(rng), theta, 0.0};
}

// Round sphere chart, K = +1: only for exercising the blow-up guard.
ConformalMetric sphere() {
  return ConformalMetric("sphere", [](double x, double y) {
    const double q = 1.0 + x * x + y * y;
    return ConformalJet{std::log(2.0 / q), -2.0 * x / q, -2.0 * y / q, -2.0 * (q - 2.0 * x * x) / (q * q),
                        -2.0 * (q - 2.0 * y * y) / (q * q)};
  });
}

}  // namespace

TEST_CASE("presets have nonpositive curvature") {
  for (MetricPreset p : kPresets) {
    const ConformalMetric m = ConformalMetric::preset(p);
    CHECK(m.max_curvature_on_grid(-3.0, 3.0, -3.0, 3.0, 61) <= 1e-12);
    CHECK(parse_metric_preset(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_metric_preset("sphere"), Error);
  const ConformalMetric h = ConformalMetric::preset(MetricPreset::constant_m1);
  CHECK(h.curvature(0.3, 0.01) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(h.curvature(-5.0, 40.0) == doctest::Approx(-1.0).epsilon(1e-12));
  const ConformalMetric s = ConformalMetric::preset(MetricPreset::flat_strip);
  CHECK(s.curvature(0.7, 3.0) == 0.0);
  // K = -e^{-2 phi} phi'' with phi = a^4, a = |x| - 1
  CHECK(s.curvature(-1.5, 0.0) == doctest::Approx(-12.0 * 0.25 * std::exp(-2.0 * 0.0625)).epsilon(1e-14));
  CHECK(ConformalMetric::preset(MetricPreset::strictly_negative).curvature(0.5, 0.5) ==
        doctest::Approx(-4.0 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("flat geodesics are straight lines") {
  const ConformalMetric m = ConformalMetric::preset(MetricPreset::flat);
  const GeodesicState s0{0.3, -0.2, 0.9, 0.0};
  const Trajectory tr = integrate_geodesic(m, s0, 20.0);
  for (const auto& s : tr.states) {
    CHECK(std::abs(s.x - (0.3 + s.s * std::cos(0.9))) < 1e-9);
    CHECK(std::abs(s.y - (-0.2 + s.s * std::sin(0.9))) < 1e-9);
  }
  CHECK(tr.states.back().s == doctest::Approx(20.0));
}

TEST_CASE("radial preset keeps the axis geodesic on the axis") {
  const ConformalMetric m = ConformalMetric::preset(MetricPreset::strictly_negative);
  for (const auto& s : integrate_geodesic(m, {0.0, 0.0, 0.0, 0.0}, 10.0).states) CHECK(s.y == 0.0);
}

TEST_CASE("half-plane geodesic matches the semicircle") {
  // From i heading right: x = tanh s, y = sech s.
  const ConformalMetric m = ConformalMetric::preset(MetricPreset::constant_m1);
  for (const auto& s : integrate_geodesic(m, {0.0, 1.0, 0.0, 0.0}, 6.0).states) {
    CHECK(std::abs(s.x - std::tanh(s.s)) < 1e-8);
    CHECK(std::abs(s.y - 1.0 / std::cosh(s.s)) < 1e-8);
  }
}

TEST_CASE("reversibility and unit speed") {
  std::mt19937_64 rng(21);
  for (MetricPreset p : kPresets) {
    const ConformalMetric m = ConformalMetric::preset(p);
    for (int i = 0; i < 5; ++i) {
      const GeodesicState s0 = random_start(p, rng);
      const Trajectory fwd = integrate_geodesic(m, s0, 50.0);
      CHECK(fwd.max_speed_drift < 1e-6);
      // Round-off grows like e^{sqrt(-K) T}, so the round trip uses a shorter T.
      const Trajectory there = integrate_geodesic(m, s0, 8.0);
      const Trajectory back = integrate_geodesic(m, there.states.back(), -8.0);
      CHECK(std::abs(back.states.back().x - s0.x) < 1e-6);
      CHECK(std::abs(back.states.back().y - s0.y) < 1e-6);
    }
  }
}

TEST_CASE("integration errors") {
  const ConformalMetric m = ConformalMetric::preset(MetricPreset::flat);
  try {
    integrate_geodesic(m, {}, 1.0, 0.05);
    FAIL("expected step-size error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::step_size);
  }
  CHECK_THROWS_AS(integrate_geodesic(ConformalMetric::preset(MetricPreset::constant_m1), {0.0, -1.0, 0.0, 0.0}, 1.0),
                  Error);
  try {
    riccati_subspaces(sphere(), {0.0, 0.0, 0.0, 0.0}, 3.0);
    FAIL("expected Riccati blow-up");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::integration_error);
  }
}

TEST_CASE("rank classification examples") {
  const GeodesicState vertical{0.0, 0.0, M_PI / 2.0, 0.0};
  const GeodesicState slanted{0.0, 0.0, 0.3, 0.0};
  CHECK(rank_classify(ConformalMetric::preset(MetricPreset::flat), slanted).rank == Rank::rank_ge_2);
  CHECK(rank_classify(ConformalMetric::preset(MetricPreset::strictly_negative), slanted).rank == Rank::rank_one);
  const ConformalMetric strip = ConformalMetric::preset(MetricPreset::flat_strip);
  const RankReport in = rank_classify(strip, vertical);
  CHECK(in.rank == Rank::rank_ge_2);
  CHECK(in.sup_abs_curvature == 0.0);
  CHECK(in.horizon == 30.0);
  const RankReport out = rank_classify(strip, slanted);
  CHECK(out.rank == Rank::rank_one);
  // Curvature along the computed path against the closed form in x.
  double sup = 0.0;
  for (double dir : {-1.0, 1.0}) {
    for (const auto& s : integrate_geodesic(strip, slanted, dir * 30.0).states) {
      const double a = std::max(std::abs(s.x) - 1.0, 0.0);
      sup = std::max(sup, 12.0 * a * a * std::exp(-2.0 * a * a * a * a));
    }
  }
  CHECK(out.sup_abs_curvature == doctest::Approx(sup).epsilon(1e-12));
}

TEST_CASE("Riccati solutions") {
  const ConformalMetric h = ConformalMetric::preset(MetricPreset::constant_m1);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 5; ++i) {
    // u' = 1 - u^2 from 0 over 30 units: tanh(30) = 1 to double precision.
    const RiccatiReport r = riccati_subspaces(h, random_start(MetricPreset::constant_m1, rng));
    CHECK(std::abs(r.u_unstable - 1.0) < 1e-6);
    CHECK(std::abs(r.u_stable + 1.0) < 1e-6);
    CHECK(std::abs(r.gap - 2.0) < 1e-6);
  }
  // Short horizon against the tanh closed form.
  const RiccatiReport s = riccati_subspaces(h, {0.0, 1.0, 0.4, 0.0}, 0.5);
  CHECK(s.u_unstable == doctest::Approx(std::tanh(0.5)).epsilon(1e-9));
  CHECK(s.u_stable == doctest::Approx(-std::tanh(0.5)).epsilon(1e-9));

  const RiccatiReport f = riccati_subspaces(ConformalMetric::preset(MetricPreset::flat), {0.1, 0.2, 1.0, 0.0});
  CHECK(std::abs(f.gap) < 1e-6);
  const ConformalMetric strip = ConformalMetric::preset(MetricPreset::flat_strip);
  CHECK(riccati_subspaces(strip, {0.0, 0.0, M_PI / 2.0, 0.0}).gap < 1e-6);
  CHECK(riccati_subspaces(strip, {0.0, 0.0, 0.3, 0.0}).gap > 1e-3);
}

TEST_CASE("classifiers agree on random geodesics") {
  std::mt19937_64 rng(23);
  for (MetricPreset p : kPresets) {
    const ConformalMetric m = ConformalMetric::preset(p);
    int disagreements = 0;
    for (int i = 0; i < 25; ++i) {
      GeodesicState s0 = random_start(p, rng);
      if (p == MetricPreset::flat_strip && i % 5 == 0) s0 = {s0.x / 2.0, s0.y, M_PI / 2.0, 0.0};
      const bool regular = rank_classify(m, s0).rank == Rank::rank_one;
      const RiccatiReport r = riccati_subspaces(m, s0);
      CHECK(r.gap >= -1e-9);
      if ((r.gap > 1e-6) != regular) ++disagreements;
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("unstable Jacobi scalar is nondecreasing") {
  std::mt19937_64 rng(24);
  for (MetricPreset p : kPresets) {
    const ConformalMetric m = ConformalMetric::preset(p);
    for (int i = 0; i < 4; ++i) {
      const std::vector<double> J = unstable_jacobi(m, random_start(p, rng), 10.0);
      CHECK(J.front() == 1.0);
      bool monotone = true;
      for (std::size_t k = 1; k < J.size(); ++k) monotone = monotone && J[k] >= J[k - 1] * (1.0 - 1e-12);
      CHECK(monotone);
    }
  }
  // K = -1: J = e^s.
  const std::vector<double> J = unstable_jacobi(ConformalMetric::preset(MetricPreset::constant_m1), {0, 1, 0, 0}, 2.0);
  CHECK(J.back() == doctest::Approx(std::exp(2.0)).epsilon(1e-6));
}

TEST_CASE("trajectory dump") {
  const auto t = riccati_trajectory(ConformalMetric::preset(MetricPreset::constant_m1), {0, 1, 0, 0}, 2.0);
  const std::string csv = trajectory_csv(t);
  CHECK(csv.rfind("s,x,y,theta,K,u_stable,u_unstable\n", 0) == 0);
  CHECK(t.front().s == doctest::Approx(-2.0));
  CHECK(t.back().s == doctest::Approx(2.0));
  CHECK(t.size() == 801);
}
