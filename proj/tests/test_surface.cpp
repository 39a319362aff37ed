#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geoflow/error.hpp"
#include "geoflow/fuchsian/surface.hpp"

using namespace geoflow;

TEST_CASE("Bolza surface data") {
  const SurfaceModel s = bolza_surface();
  CHECK(s.genus() == 2);
  CHECK(s.letter_count() == 8);
  CHECK(s.area() == doctest::Approx(4.0 * std::numbers::pi));
  // Systole: 2 arccosh(1 + sqrt 2).
  const double systole = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  CHECK(systole == doctest::Approx(3.057141838961996).epsilon(1e-14));
  CHECK(s.inradius() == doctest::Approx(systole / 2.0).epsilon(1e-12));
  // Regular octagon with interior angles pi/4: cosh R = cot(pi/8) cot(pi/8).
  const double cot = 1.0 / std::tan(std::numbers::pi / 8.0);
  CHECK(s.domain_diameter() == doctest::Approx(std::acosh(cot * cot)).epsilon(1e-12));
  for (Letter x = 0; x < 8; ++x) {
    const TraceClass tc = trace_class(s.letter(x));
    CHECK(tc.translation_length == doctest::Approx(systole).epsilon(1e-12));
    CHECK(std::abs((s.letter(x) * s.letter(inverse_letter(x))).b()) < 1e-12);
  }
}

TEST_CASE("relator closes and its conjugates close") {
  const SurfaceModel s = bolza_surface();
  const Isometry r = s.evaluate(s.relator());
  CHECK(std::abs(r.b()) < 1e-10);
  CHECK(std::abs(std::abs(r.a().real()) - 1.0) < 1e-10);
  const Isometry rr = s.evaluate(inverse(s.relator()));
  CHECK(std::abs(rr.b()) < 1e-10);
}

TEST_CASE("surface validation") {
  SurfaceConfig c = bolza_config();
  c.relator = parse_word("aBcDAbCc");
  CHECK_THROWS_AS(load_surface(c), Error);
  c = bolza_config();
  c.relator = parse_word("aBcDAbdC");
  CHECK_THROWS_AS(load_surface(c), Error);
  c = bolza_config();
  c.generators.pop_back();
  CHECK_THROWS_AS(load_surface(c), Error);
  c = bolza_config();
  c.entropy_h = 0.0;
  CHECK_THROWS_AS(load_surface(c), Error);
  try {
    c = bolza_config();
    c.relator = parse_word("aBcDAbdC");
    load_surface(c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bad_surface);
  }
}

TEST_CASE("surface file parsing matches the preset") {
  const SurfaceConfig ref = bolza_config();
  std::string text = "# bolza\nname = file-bolza\nrelator = aBcDAbCd\nentropy_h = 1\n";
  text += "domain_diameter = 2.448452447678076\n";
  char buf[200];
  for (int i = 0; i < 4; ++i) {
    const Isometry& g = ref.generators[i];
    std::snprintf(buf, sizeof buf, "generator.%d = %.17g %.17g %.17g %.17g\n", i + 1, g.a().real(),
                  g.a().imag(), g.b().real(), g.b().imag());
    text += buf;
  }
  const SurfaceModel s = load_surface(parse_surface_config(text));
  CHECK(s.name() == "file-bolza");
  CHECK(s.genus() == 2);
  CHECK(s.axis_reach() == doctest::Approx(s.domain_diameter()));
  CHECK_THROWS_AS(parse_surface_config("bogus = 1\n"), Error);
}
