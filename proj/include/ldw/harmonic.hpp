#pragma once

// Harmonic (hitting) measure of boundary cylinders on the tree, and the
// power-law decay fit nu(B(zeta, r)) ~ C r^D with r = e^{-k}.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "ldw/measure.hpp"
#include "ldw/stats.hpp"
#include "ldw/walk_engine.hpp"
#include "ldw/word.hpp"

namespace ldw {

struct CylinderEstimate {
  Word prefix;
  int depth = 0;
  std::uint64_t hits = 0, samples = 0;
  double estimate = 0;
  WilsonInterval interval;
};

struct HarmonicResult {
  std::vector<CylinderEstimate> cells;
  std::uint64_t resimulated = 0;  // trajectories that needed a doubled horizon
};

// Horizon rule: n(k) = ceil(20 k / drift) + 50; linear progress makes prefix
// flips beyond that exponentially unlikely (checked by the doubling test).
inline int harmonic_horizon(int k, double drift) {
  return static_cast<int>(std::ceil(20.0 * k / drift)) + 50;
}

inline HarmonicResult harmonic_cylinder(const TreeSpace& sp, const FiniteMeasure<Word>& mu,
                                        int depth, std::uint64_t samples, std::uint64_t seed,
                                        double drift_hint = 0.5, int safety_margin = 10) {
  if (depth < 0) throw std::invalid_argument("harmonic_cylinder: depth >= 0");
  HarmonicResult out;
  if (depth == 0) {  // the whole boundary
    CylinderEstimate c;
    c.depth = 0;
    c.hits = c.samples = samples;
    c.estimate = 1.0;
    c.interval = {1.0, 1.0};
    out.cells.push_back(c);
    return out;
  }

  int horizon = harmonic_horizon(depth, drift_hint);
  std::map<Word, std::uint64_t> counts;
  std::uint64_t n_chunks = (samples + 1023) / 1024;
  for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
    Rng rng = Rng::for_chunk(seed, chunk);
    std::uint64_t lo = chunk * 1024, hi = std::min(samples, lo + 1024);
    for (std::uint64_t id = lo; id < hi; ++id) {
      Word g;
      int h = horizon;
      for (;;) {
        for (int step = 0; step < h; ++step) detail::step_in_place(sp, g, mu.sample(rng));
        if (static_cast<int>(g.size()) >= depth + safety_margin) break;
        ++out.resimulated;  // keep walking with a doubled horizon
      }
      ++counts[cylinder_of(g, depth)];
    }
  }
  for (auto& [prefix, hits] : counts) {
    CylinderEstimate c;
    c.prefix = prefix;
    c.depth = depth;
    c.hits = hits;
    c.samples = samples;
    c.estimate = static_cast<double>(hits) / samples;
    c.interval = wilson(hits, samples);
    out.cells.push_back(c);
  }
  return out;
}

struct PowerLawFit {
  double D = 0;         // decay exponent (slope of -ln nu vs k)
  double logC = 0;      // intercept
  double residual = 0;  // 1 - R^2
  bool ok = false;
};

// Least-squares fit of ln(max cylinder estimate at depth k) against k.
inline PowerLawFit power_law_fit(const std::vector<std::pair<int, double>>& depth_to_nu) {
  if (depth_to_nu.size() < 3)
    throw std::invalid_argument("power_law_fit: need at least 3 depths");
  std::vector<double> xs, ys;
  for (auto& [k, nu] : depth_to_nu) {
    if (!(nu > 0)) continue;
    xs.push_back(static_cast<double>(k));
    ys.push_back(std::log(nu));
  }
  PowerLawFit f;
  if (xs.size() < 3) return f;
  LineFit lf;
  try {
    lf = least_squares(xs, ys);
  } catch (const std::exception&) {
    return f;  // degenerate inputs
  }
  f.D = -lf.slope;
  f.logC = lf.intercept;
  f.residual = 1.0 - lf.r2;
  f.ok = f.D > 0;
  return f;
}

}  // namespace ldw
