#pragma once

// Joint displacement spectra of finite element sets: per-n extremes of
// (1/n) d(B^n z0, z0) and (1/n) tau, Fekete brackets for l_sub(B), l(B),
// l_inf(B), arithmeticity witnesses, and the geometric Berger-Wang gap.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ldw/tree_space.hpp"
#include "ldw/word.hpp"

namespace ldw {

struct JointSpectrum {
  int n_max = 0;
  bool truncated = false;  // memo budget exceeded; partial result
  std::vector<std::vector<double>> displacement_sets;  // per n: sorted (1/n) d values
  std::vector<double> disp_min, disp_max;              // per n, normalized
  std::vector<double> tau_min, tau_max;                // per n, normalized
  // Fekete brackets (fekete inf over n <= n_max, last term).
  double l_sub_inf = 0, l_sub_last = 0;
  double l_fekete_inf = 0, l_last = 0;
};

// Exhaustive powers B^n with deduplication by reduced form.
inline JointSpectrum joint_spectrum(const TreeSpace& sp, const std::vector<Word>& B,
                                    int n_max, std::size_t budget = 2000000) {
  JointSpectrum js;
  js.n_max = n_max;
  std::unordered_set<Word, WordHash> cur{sp.identity()};
  double lsub_inf = std::numeric_limits<double>::infinity();
  double l_inf_acc = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    std::unordered_set<Word, WordHash> next;
    for (const Word& g : cur) {
      for (const Word& b : B) {
        next.insert(concat(g, b));
        if (next.size() > budget) {
          js.truncated = true;
          js.n_max = n - 1;
          return js;
        }
      }
    }
    cur = std::move(next);
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0;
    double tmin = std::numeric_limits<double>::infinity(), tmax = 0;
    std::vector<double> vals;
    vals.reserve(cur.size());
    for (const Word& g : cur) {
      double d = static_cast<double>(g.size());
      double t = static_cast<double>(tau_tree(g));
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
      vals.push_back(d / n);
    }
    std::sort(vals.begin(), vals.end());
    js.displacement_sets.push_back(std::move(vals));
    js.disp_min.push_back(dmin / n);
    js.disp_max.push_back(dmax / n);
    js.tau_min.push_back(tmin / n);
    js.tau_max.push_back(tmax / n);
    lsub_inf = std::min(lsub_inf, dmin / n);
    l_inf_acc = std::min(l_inf_acc, dmax / n);
    if (n == n_max) {
      js.l_sub_inf = lsub_inf;
      js.l_sub_last = dmin / n;
      js.l_fekete_inf = l_inf_acc;
      js.l_last = dmax / n;
    }
  }
  return js;
}

// Hausdorff distance between a finite nonempty sorted set and [lo, hi].
inline double hausdorff_to_interval(const std::vector<double>& sorted_vals, double lo,
                                    double hi) {
  double out = 0;
  // points far from the interval
  for (double v : sorted_vals)
    out = std::max(out, std::max(lo - v, v - hi));
  // interval points far from the set
  auto dist_to_set = [&](double y) {
    auto it = std::lower_bound(sorted_vals.begin(), sorted_vals.end(), y);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted_vals.end()) best = std::min(best, *it - y);
    if (it != sorted_vals.begin()) best = std::min(best, y - *(it - 1));
    return best;
  };
  out = std::max(out, dist_to_set(lo));
  out = std::max(out, dist_to_set(hi));
  for (std::size_t i = 0; i + 1 < sorted_vals.size(); ++i) {
    double a = std::max(lo, sorted_vals[i]), b = std::min(hi, sorted_vals[i + 1]);
    if (a < b) out = std::max(out, dist_to_set((a + b) / 2));
  }
  return out;
}

struct ArithmeticityWitness {
  bool arithmetic = true;  // up to n_max
  int n = 0;
  Word g1, g2;
  double l1 = 0, l2 = 0;  // stable lengths (cyclically reduced length / 1)
};

// Searches B^n for two elements with different stable length per product
// letter; in the tree l(g) is exactly the cyclically reduced length.
inline ArithmeticityWitness non_arithmetic(const TreeSpace& sp, const std::vector<Word>& B,
                                           int n_max, std::size_t budget = 2000000) {
  ArithmeticityWitness w;
  std::unordered_set<Word, WordHash> cur{sp.identity()};
  for (int n = 1; n <= n_max; ++n) {
    std::unordered_set<Word, WordHash> next;
    for (const Word& g : cur)
      for (const Word& b : B) {
        next.insert(concat(g, b));
        if (next.size() > budget) return w;
      }
    cur = std::move(next);
    std::optional<std::pair<Word, double>> first;
    for (const Word& g : cur) {
      double l = static_cast<double>(tau_tree(g));
      if (!first) {
        first = {g, l};
      } else if (l != first->second) {
        w.arithmetic = false;
        w.n = n;
        w.g1 = first->first;
        w.g2 = g;
        w.l1 = first->second;
        w.l2 = l;
        return w;
      }
    }
  }
  return w;
}

struct BergerWangReport {
  double l_inf = 0;       // max_{k <= n_max} max_{g in B^k} tau(g)/k
  double l_fekete = 0;    // Fekete bound for l(B) from displacements
  double l_last = 0;
  double gap = 0;         // l_fekete - l_inf (should shrink for non-elementary B)
};

inline BergerWangReport berger_wang(const TreeSpace& sp, const std::vector<Word>& B,
                                    int n_max, std::size_t budget = 2000000) {
  JointSpectrum js = joint_spectrum(sp, B, n_max, budget);
  BergerWangReport r;
  for (int n = 1; n <= js.n_max; ++n)
    r.l_inf = std::max(r.l_inf, js.tau_max[n - 1]);
  r.l_fekete = js.l_fekete_inf;
  r.l_last = js.l_last;
  r.gap = r.l_fekete - r.l_inf;
  return r;
}

}  // namespace ldw
