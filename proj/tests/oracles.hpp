#pragma once

// Brute-force oracles, independent of the implementation paths they check:
// full enumeration of step sequences, of reduced words, and of cyclic
// rotations. Capped at sizes where exhaustive enumeration is instant.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "ldw/word.hpp"

namespace oracle {

using ldw::Letter;
using ldw::Word;

// Visits every reduced word of length exactly k (rank q).
inline void for_each_reduced_word(int q, int k, const std::function<void(const Word&)>& f) {
  std::vector<Letter> ls;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(ls.size()) == k) {
      f(Word{ls});
      return;
    }
    for (int l = 0; l < 2 * q; ++l) {
      Letter x = static_cast<Letter>(l);
      if (!ls.empty() && ls.back() == ldw::letter_inverse(x)) continue;
      ls.push_back(x);
      rec();
      ls.pop_back();
    }
  };
  rec();
}

// Visits every step sequence of length n over the 2q generators, maintaining
// the reduced product incrementally. (2q)^n leaves.
inline void for_each_step_word(int q, int n, const std::function<void(const Word&)>& f) {
  std::vector<Letter> w;
  std::function<void(int)> rec = [&](int depth) {
    if (depth == n) {
      f(Word{w});
      return;
    }
    for (int l = 0; l < 2 * q; ++l) {
      Letter x = static_cast<Letter>(l);
      bool cancelled = !w.empty() && w.back() == ldw::letter_inverse(x);
      Letter popped = 0;
      if (cancelled) {
        popped = w.back();
        w.pop_back();
      } else {
        w.push_back(x);
      }
      rec(depth + 1);
      if (cancelled)
        w.push_back(popped);
      else
        w.pop_back();
    }
  };
  rec(0);
}

// Exact law of d_n as counts over (2q)^n step words: counts[k] = #sequences
// with reduced length k.
inline std::vector<std::uint64_t> distance_counts(int q, int n) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  for_each_step_word(q, n, [&](const Word& w) { ++counts[w.size()]; });
  return counts;
}

// Exact law of tau(gamma_n) as counts over step words.
inline std::vector<std::uint64_t> tau_counts(int q, int n) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  for_each_step_word(q, n, [&](const Word& w) { ++counts[ldw::tau_tree(w)]; });
  return counts;
}

// Cyclic-profile counts by full enumeration of reduced words.
inline std::vector<std::uint64_t> cyclic_profile_counts(int q, int k) {
  std::vector<std::uint64_t> counts(k / 2 + 1, 0);
  for_each_reduced_word(q, k, [&](const Word& w) {
    std::size_t core = ldw::tau_tree(w);
    ++counts[(k - core) / 2];
  });
  return counts;
}

// Stripping oracle for cyclic reduction: repeatedly remove matching ends.
inline Word strip_cyclic(const Word& w) {
  std::vector<Letter> v = w.ls;
  while (v.size() >= 2 && v.front() == ldw::letter_inverse(v.back())) {
    v.erase(v.begin());
    v.pop_back();
  }
  return Word{v};
}

// Minimum reduced length over all cyclic rotations.
inline std::size_t min_rotation_length(const Word& w) {
  std::size_t best = w.size();
  for (std::size_t i = 0; i < w.size(); ++i)
    best = std::min(best, ldw::rotate(w, i).size());
  return best;
}

}  // namespace oracle
