#include "geoflow/fuchsian/word.hpp"

#include <algorithm>

#include "geoflow/error.hpp"

namespace geoflow {

Word inverse(std::string_view w) {
  Word out(w.rbegin(), w.rend());
  for (auto& c : out) c = static_cast<char>(inverse_letter(static_cast<Letter>(c)));
  return out;
}

Word free_reduce(std::string_view w) {
  Word out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && static_cast<Letter>(out.back()) == inverse_letter(static_cast<Letter>(c))) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

Word cyclic_reduce(std::string_view w) {
  Word r = free_reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 &&
         static_cast<Letter>(r[lo]) == inverse_letter(static_cast<Letter>(r[hi - 1]))) {
    ++lo;
    --hi;
  }
  return r.substr(lo, hi - lo);
}

Word least_rotation(std::string_view w) {
  const std::size_t n = w.size();
  std::size_t best = 0;
  for (std::size_t start = 1; start < n; ++start) {
    for (std::size_t k = 0; k < n; ++k) {
      const char a = w[(start + k) % n];
      const char b = w[(best + k) % n];
      if (a != b) {
        if (a < b) best = start;
        break;
      }
    }
  }
  Word out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(w[(best + k) % n]);
  return out;
}

bool is_proper_power(std::string_view w) {
  const std::size_t n = w.size();
  for (std::size_t period = 1; period <= n / 2; ++period) {
    if (n % period != 0) continue;
    bool periodic = true;
    for (std::size_t i = period; i < n && periodic; ++i) periodic = w[i] == w[i - period];
    if (periodic) return true;
  }
  return false;
}

std::string format_word(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    const auto x = static_cast<Letter>(c);
    out.push_back(static_cast<char>(((x & 1U) ? 'A' : 'a') + (x >> 1U)));
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word out;
  out.reserve(text.size());
  for (char c : text) {
    if (c >= 'a' && c <= 'z') {
      out.push_back(static_cast<char>(2 * (c - 'a')));
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(2 * (c - 'A') + 1));
    } else {
      throw Error(ErrorKind::invalid_argument, std::string("bad letter in word: ") + c);
    }
  }
  return out;
}

}  // namespace geoflow
