#include "geoflow/fuchsian/canonical.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <unordered_set>

#include "geoflow/error.hpp"

namespace geoflow {

namespace {

constexpr std::size_t kMaxStates = 200'000;

Word rotate(const Word& w, std::size_t i) { return w.substr(i) + w.substr(0, i); }

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorKind::canonicalization_failure, what);
}

}  // namespace

ConjugacyCanonicalizer::ConjugacyCanonicalizer(const SurfaceModel& surface) {
  n_ = surface.relator().size();
  seq_[0] = surface.relator();
  seq_[1] = inverse(surface.relator());
  for (int s = 0; s < 2; ++s) {
    pos_[s].assign(static_cast<std::size_t>(surface.letter_count()), 0);
    for (std::size_t j = 0; j < n_; ++j) pos_[s][static_cast<Letter>(seq_[s][j])] = j;
  }
}

std::size_t ConjugacyCanonicalizer::piece_length(const Word& w, std::size_t i, int source) const {
  const std::size_t len = w.size();
  const Word& r = seq_[source];
  const std::size_t p = pos_[source][static_cast<Letter>(w[i])];
  std::size_t k = 0;
  while (k < len && k < n_ && w[(i + k) % len] == r[(p + k) % n_]) ++k;
  return k;
}

Word ConjugacyCanonicalizer::swap_piece(const Word& w, std::size_t i, int source, std::size_t k) const {
  const std::size_t p = pos_[source][static_cast<Letter>(w[i])];
  Word v;
  v.reserve(n_ - k);
  for (std::size_t j = k; j < n_; ++j) v.push_back(seq_[source][(p + j) % n_]);
  return inverse(v) + rotate(w, i).substr(k);
}

bool ConjugacyCanonicalizer::has_long_piece(const Word& w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (int s = 0; s < 2; ++s) {
      if (2 * piece_length(w, i, s) > n_) return true;
    }
  }
  return false;
}

Word ConjugacyCanonicalizer::dehn_reduce(Word w, std::size_t& rewrites, std::size_t budget) const {
  w = cyclic_reduce(w);
  for (;;) {
    std::size_t best_k = 0, best_i = 0;
    int best_s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (int s = 0; s < 2; ++s) {
        const std::size_t k = piece_length(w, i, s);
        if (k > best_k) {
          best_k = k;
          best_i = i;
          best_s = s;
        }
      }
    }
    if (2 * best_k <= n_) return w;
    if (++rewrites > budget) fail("Dehn reduction exceeded its rewrite budget");
    w = cyclic_reduce(swap_piece(w, best_i, best_s, best_k));
  }
}

ConjugacyCanonicalizer::Explored ConjugacyCanonicalizer::explore(std::string_view word) {
  Explored out;
  const std::size_t budget = 10 * std::max<std::size_t>(word.size(), 1);
  Word w = dehn_reduce(Word(word), out.rewrites, budget);
  const std::size_t half = n_ / 2;

  for (;;) {
    const std::size_t len = w.size();
    if (len == 0) {
      out.states = {Word()};
      return out;
    }
    std::unordered_set<Word> seen{least_rotation(w)};
    std::deque<Word> queue{least_rotation(w)};
    std::optional<Word> shorter;

    // Classifies a candidate produced by a move: shorter words restart the
    // search and words of the current length join the state set.
    auto consider = [&](Word cand) {
      cand = cyclic_reduce(cand);
      if (cand.size() < len || has_long_piece(cand)) {
        Word reduced = dehn_reduce(std::move(cand), out.rewrites, budget);
        if (reduced.size() < len) {
          shorter = std::move(reduced);
          return;
        }
        cand = std::move(reduced);
      }
      Word key = least_rotation(cand);
      if (cand.size() == len && seen.insert(key).second) queue.push_back(std::move(key));
      if (seen.size() > kMaxStates) fail("shortest-word search exceeded its state budget");
    };

    auto half_swaps = [&](const Word& cur) {
      for (std::size_t i = 0; i < cur.size() && !shorter; ++i) {
        for (int s = 0; s < 2 && !shorter; ++s) {
          if (piece_length(cur, i, s) >= half) consider(swap_piece(cur, i, s, half));
        }
      }
    };

    // Chains of (2g - 1)-letter pieces: inserting y y^-1 in front of a piece q
    // makes y q a half piece; swapping it leaves the last complement letter in
    // front of the next piece, and so on. When the chain closes up the two
    // defect letters cancel and the word is back at its length (or shorter).
    // Backward chains are forward chains of the inverse word.
    auto cascade = [&](const Word& cur, std::size_t i, int s, bool inverted) {
      const Word u = rotate(cur, i);
      const Letter y = static_cast<Letter>(seq_[s][(pos_[s][static_cast<Letter>(u[0])] + n_ - 1) % n_]);
      Word out;
      Letter x = y;
      std::size_t at = 0;
      for (;;) {
        if (at + half - 1 > u.size()) break;
        int found = -1;
        for (int s2 = 0; s2 < 2 && found < 0; ++s2) {
          const std::size_t p = pos_[s2][x];
          bool match = true;
          for (std::size_t j = 1; j < half && match; ++j) match = u[at + j - 1] == seq_[s2][(p + j) % n_];
          if (match) found = s2;
        }
        if (found < 0) break;
        const std::size_t p = pos_[found][x];
        Word v;
        for (std::size_t j = half; j < n_; ++j) v.push_back(seq_[found][(p + j) % n_]);
        const Word c = inverse(v);
        out += c.substr(0, c.size() - 1);
        x = static_cast<Letter>(c.back());
        at += half - 1;
      }
      Word result = out;
      result.push_back(static_cast<char>(x));
      result += u.substr(at);
      result.push_back(static_cast<char>(inverse_letter(y)));
      consider(inverted ? inverse(result) : result);
    };

    auto defects = [&](const Word& cur) {
      for (int inverted = 0; inverted < 2 && !shorter; ++inverted) {
        const Word w2 = inverted ? inverse(cur) : cur;
        for (std::size_t i = 0; i < w2.size() && !shorter; ++i) {
          for (int s = 0; s < 2 && !shorter; ++s) {
            if (piece_length(w2, i, s) + 1 >= half) cascade(w2, i, s, inverted != 0);
          }
        }
      }
    };

    while (!shorter && !queue.empty()) {
      const Word cur = queue.front();
      queue.pop_front();
      half_swaps(cur);
      if (!shorter) defects(cur);
    }
    if (shorter) {
      if (++out.rewrites > budget) fail("shortest-word search exceeded its rewrite budget");
      w = std::move(*shorter);
      continue;
    }
    out.states.assign(seen.begin(), seen.end());
    std::sort(out.states.begin(), out.states.end());
    return out;
  }
}

std::vector<Word> ConjugacyCanonicalizer::shortest_representatives(std::string_view word) {
  return explore(word).states;
}

CanonicalClass ConjugacyCanonicalizer::canonicalize(std::string_view word) {
  Word key = least_rotation(cyclic_reduce(word));
  if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
  const Explored e = explore(key);
  CanonicalClass c;
  c.word = e.states.front();
  c.primitive = !c.word.empty() &&
                std::none_of(e.states.begin(), e.states.end(), [](const Word& s) { return is_proper_power(s); });
  for (const Word& s : e.states) memo_.emplace(s, c);
  memo_.emplace(std::move(key), c);
  return c;
}

Word canonical_class(const SurfaceModel& surface, std::string_view word) {
  ConjugacyCanonicalizer c(surface);
  return c.canonicalize(word).word;
}

}  // namespace geoflow
