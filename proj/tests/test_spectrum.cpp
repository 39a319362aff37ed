#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "geoflow/error.hpp"
#include "geoflow/fuchsian/spectrum.hpp"

using namespace geoflow;

namespace {

const double kSystole = 2.0 * std::acosh(1.0 + std::sqrt(2.0));

bool conjugate_by_search(const Ball& conjugators, const Isometry& x, const Isometry& y) {
  const Isometry yn = y.renormalized();
  for (const auto& k : conjugators.elements()) {
    const Isometry z = (k.matrix * x * k.matrix.inverse()).renormalized();
    if ((std::abs(z.a() - yn.a()) < 1e-6 && std::abs(z.b() - yn.b()) < 1e-6) ||
        (std::abs(z.a() + yn.a()) < 1e-6 && std::abs(z.b() + yn.b()) < 1e-6)) {
      return true;
    }
  }
  return false;
}

const SpectrumTable& spectrum10() {
  static const SpectrumTable t = [] {
    SpectrumOptions o;
    o.crossval_limit = 10.0;
    return build_spectrum(bolza_surface(), 10.0, o);
  }();
  return t;
}

}  // namespace

TEST_CASE("systole classes against brute-force conjugacy") {
  const SurfaceModel s = bolza_surface();
  const SpectrumTable t = build_spectrum(s, 3.1);
  for (const auto& r : t.rows()) CHECK(r.length == doctest::Approx(kSystole).epsilon(1e-9));

  // Oracle: every word of length <= 4 with translation length near the
  // systole, grouped by an explicit search for a conjugating element.
  const Ball words = brute_force_ball(s, 20.0, 4);
  const Ball conjugators = enumerate_ball(s, 7.0);
  std::vector<Isometry> reps;
  for (const auto& e : words.elements()) {
    if (e.word.empty()) continue;
    if (std::abs(trace_class(e.matrix).translation_length - kSystole) > 1e-6) continue;
    const bool known = std::any_of(reps.begin(), reps.end(),
                                   [&](const Isometry& r) { return conjugate_by_search(conjugators, r, e.matrix); });
    if (!known) reps.push_back(e.matrix);
  }
  CHECK(reps.size() == 24);
  CHECK(t.rows().size() == reps.size());
  CHECK(t.count_P(3.1) == 24);
  CHECK(t.count_P(kSystole - 0.01) == 0);
  REQUIRE(t.buckets().size() == 1);
  CHECK(t.buckets()[0].multiplicity == 24);
}

TEST_CASE("word classes match an independent axis clustering at R = 10") {
  const SurfaceModel s = bolza_surface();
  const SpectrumTable& t = spectrum10();
  // Independent count: cluster the axis keys of every element of the ball.
  const Ball ball = enumerate_ball(s, 10.0 + default_margin(s));
  const FundamentalDomain domain(s);
  std::vector<AxisKey> keys;
  for (const auto& e : ball.elements()) {
    if (e.word.empty()) continue;
    if (trace_class(e.matrix).translation_length > 10.0) continue;
    keys.push_back(axis_key(domain, e.matrix));
  }
  std::sort(keys.begin(), keys.end(), [](const AxisKey& a, const AxisKey& b) { return a.length < b.length; });
  std::vector<bool> merged(keys.size(), false);
  std::size_t clusters = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (merged[i]) continue;
    ++clusters;
    for (std::size_t j = i + 1; j < keys.size() && keys[j].length - keys[i].length <= 1e-6; ++j) {
      if (std::abs(angle_difference(keys[i].forward_angle, keys[j].forward_angle)) <= 1e-6 &&
          std::abs(angle_difference(keys[i].backward_angle, keys[j].backward_angle)) <= 1e-6) {
        merged[j] = true;
      }
    }
  }
  CHECK(clusters == t.rows().size());
  CHECK(t.metadata().crossvalidated_elements == keys.size());
}

TEST_CASE("table invariants") {
  const SurfaceModel s = bolza_surface();
  const SpectrumTable& t = spectrum10();
  ConjugacyCanonicalizer canon(s);
  std::map<Word, const GeodesicClass*> by_word;
  for (const auto& r : t.rows()) by_word[r.canonical_word] = &r;
  for (const auto& r : t.rows()) {
    CHECK(r.trace_abs == doctest::Approx(2.0 * std::cosh(r.length / 2.0)).epsilon(1e-9));
    const auto inv = by_word.find(canon.canonicalize(inverse(r.canonical_word)).word);
    REQUIRE(inv != by_word.end());
    CHECK(std::abs(inv->second->length - r.length) < 1e-9);
    CHECK(std::abs(trace_class(s.evaluate(r.canonical_word)).translation_length - r.length) < 1e-6);
    if (2.0 * r.length <= t.cutoff() && r.primitive) {
      const auto sq = by_word.find(canon.canonicalize(r.canonical_word + r.canonical_word).word);
      REQUIRE(sq != by_word.end());
      CHECK_FALSE(sq->second->primitive);
      CHECK(std::abs(sq->second->length - 2.0 * r.length) < 1e-8);
    }
  }
  const auto buckets = t.buckets();
  for (std::size_t i = 1; i < buckets.size(); ++i) CHECK(buckets[i].length - buckets[i - 1].length > 1e-6);
}

TEST_CASE("counting queries") {
  const SpectrumTable& t = spectrum10();
  CHECK(t.count_P(3.0) == 0);
  CHECK(t.count_P(kSystole + 0.01) == 24);
  std::size_t prev = 0;
  for (double x = 0.5; x <= 10.0; x += 0.5) {
    const std::size_t p = t.count_P(x);
    CHECK(p >= prev);
    prev = p;
  }
  // Windows (2k eps, 2(k + 1) eps] partition (0, 9].
  std::size_t total = 0;
  for (int k = 0; k < 9; ++k) total += t.count_window(k + 0.5, 0.5);
  CHECK(total == t.count_P(9.0));
  CHECK(t.count_P(10.0, true) < t.count_P(10.0));
  CHECK_THROWS_AS(t.count_P(10.5), Error);
  CHECK_THROWS_AS(t.count_window(9.8, 0.5), Error);
}

TEST_CASE("enumeration margin") {
  // The default margin 2 ln cosh(axis reach) is much tighter than
  // 2 domain_diameter; both must give the same table.
  const SurfaceModel s = bolza_surface();
  SpectrumOptions tight, loose;
  tight.crossval_limit = loose.crossval_limit = 0.0;
  loose.margin = 2.0 * s.domain_diameter();
  const SpectrumTable a = build_spectrum(s, 8.5, tight);
  const SpectrumTable b = build_spectrum(s, 8.5, loose);
  CHECK(a.rows() == b.rows());
}

TEST_CASE("CSV round trip is bit exact") {
  const SpectrumTable& t = spectrum10();
  const auto dir = std::filesystem::temp_directory_path() / "geoflow_spectrum_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "bolza.csv";
  save_spectrum(t, path);
  const SpectrumTable back = load_spectrum(path);
  CHECK(back == t);
  CHECK(spectrum_csv(back) == spectrum_csv(t));

  {
    std::ofstream out(path, std::ios::app);
    out << "aa,1,1,true,0\n";
  }
  CHECK_THROWS_AS(load_spectrum(path), Error);
  std::filesystem::remove_all(dir);
}
