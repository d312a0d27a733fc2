#pragma once

// Schottky sets end-to-end: the exact 2/3 checker on the tree (prefix-class
// enumeration with freezing, a genuine proof over all pairs y, z), a sampled
// checker for other backends, the ping-pong constructor from two independent
// loxodromics, translation boosting, and the cyclic-conjugate search.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldw/free_group.hpp"
#include "ldw/geometry.hpp"
#include "ldw/rng.hpp"
#include "ldw/tree_space.hpp"
#include "ldw/word.hpp"

namespace ldw {

struct SchottkyCertificate {
  double C = 0;
  bool valid = false;
  std::string mode;             // "tree-exact" or "sampled"
  double worst_fraction = 0;    // worst fraction of s with (y, s z)_{z0} > C
  std::string witness_y;        // prefix class (tree) or point description
  std::string witness_z;
  std::size_t set_size = 0;
  std::uint64_t classes_or_trials = 0;
};

namespace detail {

// Per-element state while walking z letter by letter. While `cancelling`, z so
// far is exactly the inverse of the last `c` letters of s and the product is
// the length-(|s|-c) prefix of s. Once cancellation breaks, the product only
// grows (z is reduced), so its first C+1 letters freeze as soon as they exist.
struct ProdState {
  bool cancelling = true;
  int c = 0;             // letters cancelled so far
  int len = 0;           // current product length
  std::uint64_t prefix = 0;  // first min(len, C+1) letters, base-(2q) packed
  int prefix_len = 0;
};

class TreeChecker {
 public:
  TreeChecker(const std::vector<Word>& S, int C, int q, std::uint64_t budget)
      : S_(S), C_(C), q_(q), budget_(budget) {
    max_len_ = 0;
    for (const auto& s : S_) max_len_ = std::max(max_len_, static_cast<int>(s.size()));
    depth_limit_ = max_len_ + C_ + 1;
    allowed_fail_ = S_.size() / 3;  // failures <= floor(|S|/3) passes
  }

  // Returns worst multiplicity over all (y, z); throws on budget exhaustion.
  void run() {
    std::vector<ProdState> st(S_.size());
    for (std::size_t i = 0; i < S_.size(); ++i) {
      st[i].len = static_cast<int>(S_[i].size());
      st[i].prefix_len = std::min(st[i].len, C_ + 1);
      st[i].prefix = pack_prefix(S_[i], st[i].prefix_len);
    }
    Word z;
    dfs(z, st, 0);
  }

  double worst_fraction() const {
    return static_cast<double>(worst_mult_) / static_cast<double>(S_.size());
  }
  bool valid() const { return worst_mult_ <= allowed_fail_; }
  const Word& witness_z() const { return witness_z_; }
  std::uint64_t witness_prefix() const { return witness_prefix_; }
  int witness_prefix_len() const { return witness_prefix_len_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t pack_prefix(const Word& w, int len) const {
    std::uint64_t p = 1;  // leading 1 distinguishes lengths
    for (int i = 0; i < len; ++i) p = p * (2 * q_) + w.ls[i];
    return p;
  }

  void evaluate(const Word& z, const std::vector<ProdState>& st) {
    counts_.clear();
    std::size_t best = 0;
    std::uint64_t best_prefix = 0;
    for (const auto& s : st) {
      if (s.len < C_ + 1) continue;  // short product: every y passes
      std::size_t& c = counts_[s.prefix];
      ++c;
      if (c > best) {
        best = c;
        best_prefix = s.prefix;
      }
    }
    if (best > worst_mult_) {
      worst_mult_ = best;
      witness_z_ = z;
      witness_prefix_ = best_prefix;
      witness_prefix_len_ = C_ + 1;
    }
  }

  void dfs(Word& z, const std::vector<ProdState>& st, int depth) {
    if (++nodes_ > budget_) throw std::runtime_error("verify_tree: enumeration budget exceeded");
    evaluate(z, st);
    if (depth >= depth_limit_) return;
    bool all_frozen = true;
    for (const auto& s : st)
      if (s.cancelling || s.len < C_ + 1) {
        all_frozen = false;
        break;
      }
    if (all_frozen) return;  // subtree constant from here on

    for (int lx = 0; lx < 2 * q_; ++lx) {
      Letter x = static_cast<Letter>(lx);
      if (!z.empty() && z.ls.back() == letter_inverse(x)) continue;  // keep z reduced
      std::vector<ProdState> next = st;
      for (std::size_t i = 0; i < S_.size(); ++i) {
        ProdState& p = next[i];
        const Word& s = S_[i];
        int slen = static_cast<int>(s.size());
        if (p.cancelling && p.c < slen && s.ls[slen - 1 - p.c] == letter_inverse(x)) {
          ++p.c;
          --p.len;
          p.prefix_len = std::min(p.len, C_ + 1);
          p.prefix = pack_prefix(s, p.prefix_len);
        } else {
          if (p.cancelling) p.cancelling = false;
          ++p.len;
          if (p.prefix_len < C_ + 1) {
            p.prefix = p.prefix * (2 * q_) + x;
            ++p.prefix_len;
          }
        }
      }
      z.ls.push_back(x);
      dfs(z, next, depth + 1);
      z.ls.pop_back();
    }
  }

  const std::vector<Word>& S_;
  int C_, q_, max_len_ = 0, depth_limit_ = 0;
  std::size_t allowed_fail_ = 0;
  std::uint64_t budget_, nodes_ = 0;
  std::size_t worst_mult_ = 0;
  Word witness_z_;
  std::uint64_t witness_prefix_ = 0;
  int witness_prefix_len_ = 0;
  std::unordered_map<std::uint64_t, std::size_t> counts_;
};

inline std::string unpack_prefix(std::uint64_t packed, int len, int q) {
  std::vector<Letter> ls(len);
  for (int i = len - 1; i >= 0; --i) {
    ls[i] = static_cast<Letter>(packed % (2 * q));
    packed /= 2 * q;
  }
  return format_word(Word{std::move(ls)});
}

}  // namespace detail

// Exact decision on the tree. In the tree (y, s z)_e > C iff y and s z share a
// (C+1)-prefix, and only the first max|s| + C + 1 letters of z matter, so the
// worst failure fraction over ALL pairs equals the worst prefix multiplicity
// over a finite z enumeration.
inline SchottkyCertificate verify_tree(int q, const std::vector<Word>& S, int C,
                                       std::uint64_t budget = 50000000) {
  if (S.empty()) throw std::invalid_argument("verify_tree: non-empty set required");
  if (C < 0) throw std::invalid_argument("verify_tree: C >= 0 required");
  detail::TreeChecker checker(S, C, q, budget);
  checker.run();
  SchottkyCertificate cert;
  cert.C = C;
  cert.mode = "tree-exact";
  cert.set_size = S.size();
  cert.worst_fraction = checker.worst_fraction();
  cert.valid = checker.valid();
  cert.witness_y = detail::unpack_prefix(checker.witness_prefix(), checker.witness_prefix_len(), q);
  cert.witness_z = format_word(checker.witness_z());
  cert.classes_or_trials = checker.nodes();
  return cert;
}

// Sampled checker for arbitrary backends: random pairs plus structured far
// points along the elements' axes. Non-exhaustive by construction.
template <class Space, class PointSampler>
SchottkyCertificate verify_sampled(const Space& sp, const std::vector<typename Space::Elem>& S,
                                   double C, int trials, PointSampler&& sample_point,
                                   Rng& rng) {
  if (S.empty()) throw std::invalid_argument("verify_sampled: non-empty set required");
  if (trials < 1) throw std::invalid_argument("verify_sampled: trials >= 1 required");
  auto z0 = sp.basepoint();
  SchottkyCertificate cert;
  cert.C = C;
  cert.mode = "sampled";
  cert.set_size = S.size();
  cert.classes_or_trials = static_cast<std::uint64_t>(trials);

  // structured probes: points pushed along each element's axis
  std::vector<typename Space::Point> structured;
  for (const auto& s : S) {
    auto g = s;
    for (int k = 0; k < 3; ++k) {
      try {
        structured.push_back(sp.act(g, z0));
      } catch (...) {
        break;
      }
      g = sp.compose(g, s);
    }
    if (structured.size() > 64) break;
  }

  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    typename Space::Point y, z;
    if (t < static_cast<int>(structured.size() * structured.size())) {
      y = structured[t % structured.size()];
      z = structured[(t / structured.size()) % structured.size()];
    } else {
      y = sample_point(rng);
      z = sample_point(rng);
    }
    std::size_t fails = 0;
    for (const auto& s : S)
      if (gromov_product(sp, y, sp.act(s, z), z0) > C) ++fails;
    double frac = static_cast<double>(fails) / S.size();
    if (frac > worst) worst = frac;
  }
  cert.worst_fraction = worst;
  cert.valid = worst <= 1.0 / 3.0 + 1e-12;
  return cert;
}

// Smallest C <= C_max with a valid tree-exact certificate.
inline std::optional<SchottkyCertificate> minimal_constant_tree(int q,
                                                               const std::vector<Word>& S,
                                                               int C_max) {
  if (S.empty()) throw std::invalid_argument("minimal_constant: non-empty set required");
  for (int C = 0; C <= C_max; ++C) {
    SchottkyCertificate cert = verify_tree(q, S, C);
    if (cert.valid) return cert;
  }
  return std::nullopt;
}

struct PingPongResult {
  std::vector<Word> S;   // tree version
  int n_used = 0;
  SchottkyCertificate certificate;
  std::string diagnostics;
};

// Appendix-style construction on the tree: S = all positive words of length 7
// in the alphabet {g1^{2n}, g2^{2n}}, with n doubling until a certificate
// passes. Inputs must be loxodromic and independent; elementary inputs fail.
inline PingPongResult construct_pingpong_tree(int q, const Word& g1, const Word& g2,
                                              int n_cap = 8, int C_max = 12) {
  if (tau_tree(g1) == 0 || tau_tree(g2) == 0)
    throw std::invalid_argument("construct_pingpong: inputs must be loxodromic (tau > 0)");
  PingPongResult out;
  for (int n = 1; n <= n_cap; n *= 2) {
    Word a1, a2;
    for (int i = 0; i < 2 * n; ++i) {
      a1 = concat(a1, g1);
      a2 = concat(a2, g2);
    }
    std::vector<Word> S;
    S.reserve(128);
    for (int mask = 0; mask < 128; ++mask) {
      Word w;
      for (int bit = 6; bit >= 0; --bit) w = concat(w, (mask >> bit) & 1 ? a2 : a1);
      S.push_back(w);
    }
    // dedup guards against non-independent inputs producing collisions
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    if (S.size() != 128) continue;

    auto cert = minimal_constant_tree(q, S, C_max);
    if (cert) {
      out.S = std::move(S);
      out.n_used = n;
      out.certificate = *cert;
      out.diagnostics = "positive words of length 7 over {g1^" + std::to_string(2 * n) +
                        ", g2^" + std::to_string(2 * n) + "}";
      return out;
    }
  }
  throw std::runtime_error(
      "construct_pingpong: no passing n; inputs likely not independent loxodromics");
}

struct BoostResult {
  std::size_t best_index = 0;
  double tau_best = 0;
  double deficit = 0;  // d(z0, g z0) - tau(s* g)
};

// argmax over s in S of tau(s g); ties resolved by canonical (first) order.
inline BoostResult boost_translation_tree(const std::vector<Word>& S, const Word& g) {
  if (S.empty()) throw std::invalid_argument("boost_translation: empty set");
  BoostResult r;
  std::size_t best = 0;
  bool have = false;
  for (std::size_t i = 0; i < S.size(); ++i) {
    std::size_t t = tau_tree(concat(S[i], g));
    if (!have || t > best) {
      best = t;
      r.best_index = i;
      have = true;
    }
  }
  r.tau_best = static_cast<double>(best);
  r.deficit = static_cast<double>(g.size()) - r.tau_best;
  return r;
}

struct MovingTauResult {
  std::size_t best_index = 0;  // i in [1, n]
  double achieved = 0;         // d(z0, rot_i z0)
  double gap = 0;              // |achieved - r|
};

// Evaluates all n cyclic splits r_i g_i = b_{i+1}..b_n b_1..b_i and returns
// the index whose displacement is closest to the target r.
inline MovingTauResult moving_tau_search(const Word& w, double r) {
  std::size_t n = w.size();
  if (n == 0) throw std::invalid_argument("moving_tau_search: empty word");
  double tau = static_cast<double>(tau_tree(w));
  double d = static_cast<double>(n);
  if (r < tau - 1e-9 || r > d + 1e-9)
    throw std::invalid_argument("moving_tau_search: r outside [tau, d]");
  MovingTauResult res;
  res.gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i) {
    double len = static_cast<double>(rotate(w, i % n).size());
    double gap = std::fabs(len - r);
    if (gap < res.gap) {
      res.gap = gap;
      res.best_index = i;
      res.achieved = len;
    }
  }
  return res;
}

}  // namespace ldw
