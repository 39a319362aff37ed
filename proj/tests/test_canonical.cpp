#include <doctest.h>

#include <cmath>
#include <random>

#include "geoflow/error.hpp"
#include "geoflow/fuchsian/ball.hpp"
#include "geoflow/fuchsian/canonical.hpp"

using namespace geoflow;

namespace {

Word random_reduced_word(std::mt19937_64& rng, int max_len, int letters) {
  std::uniform_int_distribution<int> len_d(1, max_len), letter_d(0, letters - 1);
  Word w;
  const int len = len_d(rng);
  while (static_cast<int>(w.size()) < len) {
    const auto x = static_cast<Letter>(letter_d(rng));
    if (!w.empty() && static_cast<Letter>(w.back()) == inverse_letter(x)) continue;
    w.push_back(static_cast<char>(x));
  }
  return w;
}

double abs_trace(const SurfaceModel& s, const Word& w) { return std::abs(s.evaluate(w).trace()); }

// |tr| of a word evaluated in quad precision: long conjugates have entries
// near 1e8 and lose their trace to cancellation in double.
double abs_trace_quad(const SurfaceModel& s, const Word& w) {
  using Q = __float128;
  Q ar = 1, ai = 0, br = 0, bi = 0;
  for (char ch : w) {
    const Isometry& g = s.letter(static_cast<Letter>(ch));
    const Q gar = g.a().real(), gai = g.a().imag(), gbr = g.b().real(), gbi = g.b().imag();
    // [a b; conj b conj a] * [A B; conj B conj A]
    const Q nar = ar * gar - ai * gai + br * gbr + bi * gbi;
    const Q nai = ar * gai + ai * gar + bi * gbr - br * gbi;
    const Q nbr = ar * gbr - ai * gbi + br * gar + bi * gai;
    const Q nbi = ar * gbi + ai * gbr + bi * gar - br * gai;
    ar = nar;
    ai = nai;
    br = nbr;
    bi = nbi;
  }
  const Q tr = 2 * ar;
  return static_cast<double>(tr < 0 ? -tr : tr);
}

}  // namespace

TEST_CASE("generators and one-letter conjugates") {
  const SurfaceModel s = bolza_surface();
  ConjugacyCanonicalizer c(s);
  CHECK(format_word(c.canonicalize(parse_word("a")).word) == "a");
  CHECK(format_word(c.canonicalize(parse_word("baB")).word) == "a");
  CHECK(c.canonicalize(parse_word("a")).primitive);
  CHECK_FALSE(c.canonicalize(parse_word("aa")).primitive);
  CHECK(c.canonicalize(parse_word("aBcDAbCd")).word.empty());
}

TEST_CASE("Dehn replacement of over-half pieces") {
  const SurfaceModel s = bolza_surface();
  ConjugacyCanonicalizer c(s);
  // aBcDA is five letters of the relator; it equals (bCd)^-1 = DcB.
  CHECK(c.canonicalize(parse_word("aBcDA")).word == c.canonicalize(parse_word("DcB")).word);
  CHECK(c.canonicalize(parse_word("aBcDA")).word.size() == 3);
}

TEST_CASE("half-relator swaps and chain moves stay in the class") {
  const SurfaceModel s = bolza_surface();
  ConjugacyCanonicalizer c(s);
  // Three-letter pieces BcD and BDc: the powers are linked only by a chain
  // that wraps around the whole word.
  for (int k = 1; k <= 4; ++k) {
    Word x, y;
    for (int j = 0; j < k; ++j) {
      x += parse_word("BcD");
      y += parse_word("BDc");
    }
    CHECK(c.canonicalize(x).word == c.canonicalize(y).word);
    CHECK(std::abs(abs_trace(s, x) - abs_trace(s, y)) < 1e-7 * abs_trace(s, x));
  }
  for (const auto& st : c.shortest_representatives(parse_word("aBcbADcd"))) {
    CHECK(std::abs(abs_trace(s, st) - abs_trace(s, parse_word("aBcbADcd"))) < 1e-7);
  }
}

TEST_CASE("conjugation invariance on random pairs") {
  const SurfaceModel s = bolza_surface();
  ConjugacyCanonicalizer c(s);
  std::mt19937_64 rng(11);
  int nontrivial = 0;
  for (int i = 0; i < 500; ++i) {
    const Word w = random_reduced_word(rng, 6, 8);
    const Word u = random_reduced_word(rng, 4, 8);
    const Word conj = free_reduce(u + w + inverse(u));
    const CanonicalClass a = c.canonicalize(w);
    const CanonicalClass b = c.canonicalize(conj);
    CHECK(a.word == b.word);
    CHECK(a.primitive == b.primitive);
    CHECK(std::abs(abs_trace_quad(s, w) - abs_trace_quad(s, conj)) < 1e-7 * abs_trace_quad(s, w));
    // Idempotent, and the canonical word represents the class.
    CHECK(c.canonicalize(a.word).word == a.word);
    if (!a.word.empty()) {
      ++nontrivial;
      CHECK(std::abs(abs_trace_quad(s, a.word) - abs_trace_quad(s, w)) < 1e-7 * abs_trace_quad(s, w));
    }
  }
  CHECK(nontrivial > 450);
}

TEST_CASE("canonical classes against pairwise conjugacy search") {
  // Oracle: u and v are conjugate iff k u k^-1 = +-v for some k of bounded
  // displacement; that bound holds here because both have axes crossing a
  // neighbourhood of F.
  const SurfaceModel s = bolza_surface();
  ConjugacyCanonicalizer c(s);
  const Ball small = enumerate_ball(s, 3.2);
  const Ball conjugators = enumerate_ball(s, 7.0);
  std::vector<GroupElement> elems(small.elements().begin() + 1, small.elements().end());
  const Ball b = enumerate_ball(s, 6.0);
  for (const auto& e : b.elements()) {
    if (e.word.size() == 4 || e.word.size() == 3) elems.push_back(e);
    if (elems.size() > 120) break;
  }
  auto conjugate = [&](const Isometry& x, const Isometry& y) {
    for (const auto& k : conjugators.elements()) {
      const Isometry z = (k.matrix * x * k.matrix.inverse()).renormalized();
      const Isometry yn = y.renormalized();
      if ((std::abs(z.a() - yn.a()) < 1e-6 && std::abs(z.b() - yn.b()) < 1e-6) ||
          (std::abs(z.a() + yn.a()) < 1e-6 && std::abs(z.b() + yn.b()) < 1e-6)) {
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      const bool same_word = c.canonicalize(elems[i].word).word == c.canonicalize(elems[j].word).word;
      if (std::abs(std::abs(elems[i].matrix.trace()) - std::abs(elems[j].matrix.trace())) > 1e-6) {
        CHECK_FALSE(same_word);
        continue;
      }
      CHECK(same_word == conjugate(elems[i].matrix, elems[j].matrix));
    }
  }
}

TEST_CASE("rewrite budget") {
  const SurfaceModel s = bolza_surface();
  ConjugacyCanonicalizer c(s);
  // A long word made of relator pieces reduces a lot but within 10 |w| rewrites.
  Word w;
  for (int k = 0; k < 6; ++k) w += parse_word("aBcDA");
  CHECK_NOTHROW(c.canonicalize(w));
}
