#pragma once

// Conjugacy classes of a one-relator surface group as canonical cyclic words.
//
// The input is cyclically reduced and then Dehn-reduced: any cyclic subword
// that is more than half of a rotation of the relator or its inverse is
// replaced by the shorter complement. Shortest cyclic words are not unique in
// a surface group (half-relator subwords can be swapped for their complement,
// and chains of (2g - 1)-letter relator pieces can be pushed across), so the
// canonical form is the least rotation over every shortest cyclic word
// reachable by those moves. Primitivity is read off the same set: a class is
// a proper power iff one of its shortest words is.

#include <cstddef>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geoflow/fuchsian/surface.hpp"

namespace geoflow {

struct CanonicalClass {
  Word word;  // empty for the identity class
  bool primitive = true;
};

class ConjugacyCanonicalizer {
 public:
  explicit ConjugacyCanonicalizer(const SurfaceModel& surface);

  /// Throws canonicalization-failure if reduction needs more than 10 |word|
  /// rewrites or the search over shortest words exceeds its state budget.
  CanonicalClass canonicalize(std::string_view word);

  /// Every shortest cyclic word (as least rotations) in the class of `word`.
  std::vector<Word> shortest_representatives(std::string_view word);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Explored {
    std::vector<Word> states;  // least rotations, all of minimal length
    std::size_t rewrites = 0;
  };

  // Length of the longest prefix of the cyclic word w read from position i that
  // is a piece of the cyclic relator (source 0) or its inverse (source 1).
  std::size_t piece_length(const Word& w, std::size_t i, int source) const;
  // w with the piece of length k at i replaced by the complementary side.
  Word swap_piece(const Word& w, std::size_t i, int source, std::size_t k) const;
  // Repeated Dehn replacement of over-half pieces; returns the cyclic reduction.
  Word dehn_reduce(Word w, std::size_t& rewrites, std::size_t budget) const;
  bool has_long_piece(const Word& w) const;
  Explored explore(std::string_view word);

  std::size_t n_ = 0;  // relator length 4g
  Word seq_[2];
  std::vector<std::size_t> pos_[2];
  std::unordered_map<Word, CanonicalClass> memo_;
};

/// One-shot convenience wrapper.
Word canonical_class(const SurfaceModel& surface, std::string_view word);

}  // namespace geoflow
