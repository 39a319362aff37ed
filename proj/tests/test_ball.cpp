#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "geoflow/error.hpp"
#include "geoflow/fuchsian/ball.hpp"

using namespace geoflow;

TEST_CASE("ball just above the systole: identity and the eight generators") {
  const SurfaceModel s = bolza_surface();
  const Ball b = enumerate_ball(s, 3.1);
  REQUIRE(b.size() == 9);
  CHECK(b.elements()[0].word.empty());
  for (std::size_t i = 1; i < 9; ++i) {
    CHECK(b.elements()[i].word.size() == 1);
    CHECK(b.elements()[i].displacement == doctest::Approx(3.057141838961996).epsilon(1e-12));
  }
}

TEST_CASE("pruned enumeration agrees with brute force") {
  const SurfaceModel s = bolza_surface();
  // The brute-force count stabilises between lengths 5 and 6.
  const Ball bf5 = brute_force_ball(s, 6.5, 5);
  const Ball bf6 = brute_force_ball(s, 6.5, 6);
  const Ball b = enumerate_ball(s, 6.5);
  CHECK(bf5.size() == bf6.size());
  CHECK(b.size() == bf6.size());
  IsometryIndex index;
  for (std::size_t i = 0; i < b.size(); ++i) index.insert(b.elements()[i].matrix, static_cast<std::int64_t>(i));
  for (const auto& e : bf6.elements()) {
    const std::int64_t j = index.find(e.matrix);
    REQUIRE(j >= 0);
    CHECK(b.elements()[j].displacement == doctest::Approx(e.displacement).epsilon(1e-10));
    // Breadth-first search records a word no longer than any other.
    CHECK(b.elements()[j].word.size() <= e.word.size());
  }
}

TEST_CASE("words evaluate to their matrices and the ball is sorted") {
  const SurfaceModel s = bolza_surface();
  const Ball b = enumerate_ball(s, 7.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& e = b.elements()[i];
    const Isometry g = s.evaluate(e.word);
    const double sign = (g.a().real() * e.matrix.a().real() + g.a().imag() * e.matrix.a().imag()) >= 0 ? 1 : -1;
    CHECK(std::abs(g.a() - sign * e.matrix.a()) < 1e-8);
    CHECK(std::abs(g.b() - sign * e.matrix.b()) < 1e-8);
    if (i > 0) CHECK(b.elements()[i - 1].displacement <= e.displacement);
  }
  CHECK(b.count_within(3.1) == 9);
  CHECK(b.restricted(3.1).size() == 9);
}

TEST_CASE("closed under inverses") {
  const SurfaceModel s = bolza_surface();
  const Ball b = enumerate_ball(s, 8.0);
  IsometryIndex index;
  for (std::size_t i = 0; i < b.size(); ++i) index.insert(b.elements()[i].matrix, static_cast<std::int64_t>(i));
  for (const auto& e : b.elements()) CHECK(index.find(e.matrix.inverse()) >= 0);
}

TEST_CASE("orbit growth is exponential at rate one") {
  // |ball(R)| ~ area of the hyperbolic disk / area(F) = 2 pi (cosh R - 1) / 4 pi.
  const SurfaceModel s = bolza_surface();
  const Ball b = enumerate_ball(s, 10.0);
  const double r9 = static_cast<double>(b.count_within(9.0));
  const double r10 = static_cast<double>(b.size());
  CHECK(std::log(r10 / r9) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(r10 / ((std::cosh(10.0) - 1.0) / 2.0) == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("budget and cap errors") {
  const SurfaceModel s = bolza_surface();
  CHECK_THROWS_AS(enumerate_ball(s, 16.5), Error);
  BallOptions opt;
  opt.max_elements = 100;
  try {
    enumerate_ball(s, 8.0, opt);
    FAIL("expected a partial result");
  } catch (const PartialResultError& e) {
    CHECK(e.kind() == ErrorKind::partial_result);
    CHECK(e.completed_radius() > 3.0);
    CHECK(e.completed_radius() < 8.0);
    const Ball inner = enumerate_ball(s, e.completed_radius() - 1e-9);
    CHECK(inner.size() <= 100);
  }
}
