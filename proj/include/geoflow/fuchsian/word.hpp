#pragma once

// Words over the generators of a surface group.
//
// Letters are small integers 0 .. 4g-1; the inverse of letter i is i ^ 1. The
// fixed tie-breaking order is g1 < g1^-1 < g2 < ... , which is plain integer
// order. In text, generator j is written 'a' + j and its inverse 'A' + j.

#include <cstdint>
#include <string>
#include <string_view>

namespace geoflow {

using Letter = std::uint8_t;
/// Letter values stored in a std::string (bytes 0 .. 4g-1, not printable).
using Word = std::string;

inline Letter inverse_letter(Letter x) { return static_cast<Letter>(x ^ 1U); }

Word inverse(std::string_view w);
Word free_reduce(std::string_view w);
/// Free reduction followed by removal of cancelling first/last letters.
Word cyclic_reduce(std::string_view w);
/// Lexicographically least rotation.
Word least_rotation(std::string_view w);
/// True when w = u^k for some k >= 2.
bool is_proper_power(std::string_view w);

std::string format_word(std::string_view w);
/// Throws invalid-argument on characters outside [a-zA-Z].
Word parse_word(std::string_view text);

}  // namespace geoflow
