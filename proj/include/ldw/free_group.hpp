#pragma once

// Counting and sampling on the Cayley tree of F_q: sphere sizes, the cyclic
// profile U(k, m) (reduced words of length k whose cyclic reduction removes
// exactly m letter pairs), and uniform sphere sampling.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ldw/rng.hpp"
#include "ldw/word.hpp"

namespace ldw {

using BigInt = boost::multiprecision::cpp_int;

inline void require_rank(int q) {
  if (q < 2 || q > 26) throw std::invalid_argument("rank q must be in [2, 26]");
}

// |sphere of radius k| = 2q(2q-1)^{k-1}, overflow signalled.
inline std::uint64_t sphere_count(int q, int k) {
  require_rank(q);
  if (k < 0) throw std::invalid_argument("sphere_count: k < 0");
  if (k == 0) return 1;
  std::uint64_t n = static_cast<std::uint64_t>(2 * q);
  std::uint64_t base = static_cast<std::uint64_t>(2 * q - 1);
  for (int i = 1; i < k; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::overflow_error("sphere_count: overflow");
    n *= base;
  }
  return n;
}

inline BigInt sphere_count_big(int q, int k) {
  require_rank(q);
  if (k < 0) throw std::invalid_argument("sphere_count: k < 0");
  if (k == 0) return 1;
  BigInt n = 2 * q;
  for (int i = 1; i < k; ++i) n *= (2 * q - 1);
  return n;
}

inline double log_sphere_count(int q, int k) {
  require_rank(q);
  if (k == 0) return 0.0;
  return std::log(2.0 * q) + (k - 1) * std::log(2.0 * q - 1.0);
}

// Number of cyclically reduced words of each length j = 0..k_max, exact.
// Recursion over per-first-letter class counts: a_k words ending in the first
// letter, b_k ending in its inverse, with totals (2q-1)^{k-1} per first letter.
inline std::vector<BigInt> cyclically_reduced_counts(int q, int k_max) {
  require_rank(q);
  std::vector<BigInt> C(k_max + 1);
  C[0] = 1;  // the empty word
  if (k_max >= 1) C[1] = 2 * q;
  BigInt a = 1, b = 0, total = 1;  // per fixed first letter, length 1
  for (int k = 2; k <= k_max; ++k) {
    BigInt a2 = total - b;  // append first letter, forbidden after its inverse
    BigInt b2 = total - a;  // append inverse of first letter
    a = a2;
    b = b2;
    total *= (2 * q - 1);
    C[k] = 2 * q * (total - b);
  }
  return C;
}

// ln of the above, stable for large k (tracks the ratio b_k / (2q-1)^{k-1}).
inline std::vector<double> log_cyclically_reduced_counts(int q, int k_max) {
  require_rank(q);
  std::vector<double> logC(k_max + 1);
  logC[0] = 0.0;
  if (k_max >= 1) logC[1] = std::log(2.0 * q);
  double alpha = 1.0, beta = 0.0;  // a_k, b_k normalized by (2q-1)^{k-1}
  double base = 2.0 * q - 1.0;
  for (int k = 2; k <= k_max; ++k) {
    double a2 = (1.0 - beta) / base;
    double b2 = (1.0 - alpha) / base;
    alpha = a2;
    beta = b2;
    logC[k] = std::log(2.0 * q) + (k - 1) * std::log(base) + std::log1p(-beta);
  }
  return logC;
}

// U(k, m): reduced words of length k with cyclically reduced core length
// k - 2m. Closed form from the unique decomposition w = u v u^{-1}:
//   U(k, 0) = C(k),  U(k, m) = C(k-2m) (2q-2) (2q-1)^{m-1} for m >= 1, k-2m >= 1,
// and U(k, k/2) = 0 for k > 0 (the core of a nonempty reduced word is nonempty).
struct CyclicProfile {
  int q = 2;
  int k = 0;
  std::vector<BigInt> counts;  // counts[m], m = 0..k/2
};

inline CyclicProfile cyclic_profile(int q, int k, int cap = 4096) {
  require_rank(q);
  if (k < 0 || k > cap) throw std::invalid_argument("cyclic_profile: length cap exceeded");
  CyclicProfile p;
  p.q = q;
  p.k = k;
  p.counts.assign(k / 2 + 1, BigInt(0));
  auto C = cyclically_reduced_counts(q, k);
  if (k == 0) {
    p.counts[0] = 1;
    return p;
  }
  p.counts[0] = C[k];
  BigInt pw = 1;  // (2q-1)^{m-1}
  for (int m = 1; 2 * m < k; ++m) {
    p.counts[m] = C[k - 2 * m] * (2 * q - 2) * pw;
    pw *= (2 * q - 1);
  }
  return p;
}

// Uniform sample over the sphere of radius k.
inline Word uniform_sphere_sample(int q, int k, Rng& rng) {
  require_rank(q);
  std::vector<Letter> ls;
  ls.reserve(k);
  for (int i = 0; i < k; ++i) {
    if (i == 0) {
      ls.push_back(static_cast<Letter>(rng.uniform_below(2 * q)));
    } else {
      Letter forbidden = letter_inverse(ls.back());
      Letter l = static_cast<Letter>(rng.uniform_below(2 * q - 1));
      if (l >= forbidden) ++l;
      ls.push_back(l);
    }
  }
  return Word{std::move(ls)};
}

}  // namespace ldw
