#pragma once

// Reduced words in the free group F_q and the word metric on its Cayley tree.
// Letters are encoded in one byte: code = 2*index + (1 if inverse).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldw {

using Letter = std::uint8_t;

constexpr Letter make_letter(int index, bool inverse) {
  return static_cast<Letter>(2 * index + (inverse ? 1 : 0));
}
constexpr Letter letter_inverse(Letter l) { return l ^ 1u; }
constexpr int letter_index(Letter l) { return l >> 1; }
constexpr bool letter_is_inverse(Letter l) { return (l & 1u) != 0; }

struct Word {
  std::vector<Letter> ls;

  Word() = default;
  explicit Word(std::vector<Letter> v) : ls(std::move(v)) {}

  std::size_t size() const { return ls.size(); }
  bool empty() const { return ls.empty(); }
  bool operator==(const Word& o) const { return ls == o.ls; }
  bool operator!=(const Word& o) const { return !(*this == o); }
  bool operator<(const Word& o) const { return ls < o.ls; }
};

// Free reduction of an arbitrary letter sequence. Idempotent.
inline Word reduce(const std::vector<Letter>& raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (!out.empty() && out.back() == letter_inverse(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word{std::move(out)};
}

// Concatenation with cancellation at the junction only; both inputs reduced.
inline Word concat(const Word& u, const Word& v) {
  std::vector<Letter> out = u.ls;
  for (Letter l : v.ls) {
    if (!out.empty() && out.back() == letter_inverse(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word{std::move(out)};
}

inline Word invert(const Word& w) {
  std::vector<Letter> out(w.ls.rbegin(), w.ls.rend());
  for (Letter& l : out) l = letter_inverse(l);
  return Word{std::move(out)};
}

// Strips matching first/last inverse pairs; output length is tau(w) in the tree.
inline Word cyclic_reduce(const Word& w) {
  std::size_t lo = 0, hi = w.ls.size();
  while (hi - lo >= 2 && w.ls[lo] == letter_inverse(w.ls[hi - 1])) {
    ++lo;
    --hi;
  }
  return Word{std::vector<Letter>(w.ls.begin() + lo, w.ls.begin() + hi)};
}

inline std::size_t tau_tree(const Word& w) { return cyclic_reduce(w).size(); }

// Word metric d(u, v) = |u^-1 v|.
inline std::size_t word_dist(const Word& u, const Word& v) {
  std::size_t k = 0;
  std::size_t m = std::min(u.size(), v.size());
  while (k < m && u.ls[k] == v.ls[k]) ++k;
  return (u.size() - k) + (v.size() - k);
}

inline std::size_t common_prefix_len(const Word& u, const Word& v) {
  std::size_t k = 0;
  std::size_t m = std::min(u.size(), v.size());
  while (k < m && u.ls[k] == v.ls[k]) ++k;
  return k;
}

// Cyclic rotation by i: b_{i+1}..b_n b_1..b_i, reduced.
inline Word rotate(const Word& w, std::size_t i) {
  Word head{std::vector<Letter>(w.ls.begin() + i, w.ls.end())};
  Word tail{std::vector<Letter>(w.ls.begin(), w.ls.begin() + i)};
  return concat(head, tail);
}

inline Word cylinder_of(const Word& w, std::size_t depth) {
  if (w.size() < depth) throw std::invalid_argument("cylinder_of: word shorter than depth");
  return Word{std::vector<Letter>(w.ls.begin(), w.ls.begin() + depth)};
}

// Text format: a..z generators, A..Z their inverses.
inline std::string format_word(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter l : w.ls) {
    int i = letter_index(l);
    if (i >= 26) throw std::invalid_argument("format_word: rank > 26");
    s.push_back(static_cast<char>((letter_is_inverse(l) ? 'A' : 'a') + i));
  }
  return s;
}

inline Word parse_word(const std::string& s) {
  std::vector<Letter> raw;
  raw.reserve(s.size());
  for (char c : s) {
    if (c >= 'a' && c <= 'z')
      raw.push_back(make_letter(c - 'a', false));
    else if (c >= 'A' && c <= 'Z')
      raw.push_back(make_letter(c - 'A', true));
    else if (c == ' ')
      continue;
    else
      throw std::invalid_argument(std::string("parse_word: bad character '") + c + "'");
  }
  return reduce(raw);
}

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w.ls) {
      h ^= l;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace ldw
