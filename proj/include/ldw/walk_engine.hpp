#pragma once

// Trajectory simulation of the mu-random walk on any backend. Chunked,
// counter-seeded RNG makes every run bit-reproducible regardless of worker
// count; observables are computed on the fly and trajectories never stored.

#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "ldw/geometry.hpp"
#include "ldw/measure.hpp"
#include "ldw/rng.hpp"
#include "ldw/sl2.hpp"
#include "ldw/stats.hpp"
#include "ldw/tree_space.hpp"

namespace ldw {

struct WalkRun {
  int horizon = 1;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  int chunk_size = 1024;  // part of the run contract; fixed so workers don't matter
  bool want_ell = false;
  int ell_n_max = 16;
  int workers = 1;

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("WalkRun: horizon >= 1");
    if (samples < 1) throw std::invalid_argument("WalkRun: samples >= 1");
    if (chunk_size < 1) throw std::invalid_argument("WalkRun: chunk_size >= 1");
  }
};

struct SampleRecord {
  std::uint64_t id = 0;
  double d = 0;
  double tau = 0;
  double ell_lo = 0, ell_hi = 0;
};

namespace detail {

// In-place step, amortized O(|atom|) on the tree.
inline void step_in_place(const TreeSpace&, Word& state, const Word& atom) {
  for (Letter l : atom.ls) {
    if (!state.ls.empty() && state.ls.back() == letter_inverse(l))
      state.ls.pop_back();
    else
      state.ls.push_back(l);
  }
}

inline void step_in_place(const DiscSpace& sp, MobiusElement& state,
                          const MobiusElement& atom) {
  state = sp.compose(state, atom);
}

}  // namespace detail

// Runs every trajectory, invoking visit(chunk_rng_sample_id, final_element)
// in sample order. on_step, when provided, is called after every step with
// (step_index, current_element).
template <class Space, class Visit>
void run_walk(const Space& sp, const FiniteMeasure<typename Space::Elem>& mu,
              const WalkRun& run, Visit&& visit) {
  run.validate();
  mu.validate();
  std::uint64_t n_chunks = (run.samples + run.chunk_size - 1) / run.chunk_size;
  for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
    Rng rng = Rng::for_chunk(run.seed, chunk);
    std::uint64_t lo = chunk * run.chunk_size;
    std::uint64_t hi = std::min(run.samples, lo + run.chunk_size);
    for (std::uint64_t id = lo; id < hi; ++id) {
      typename Space::Elem g = sp.identity();
      for (int step = 0; step < run.horizon; ++step)
        detail::step_in_place(sp, g, mu.sample(rng));
      visit(id, g);
    }
  }
}

// As run_walk, but visit receives the trajectory at every step (for probes
// needing intermediate positions).
template <class Space, class VisitStep>
void run_walk_steps(const Space& sp, const FiniteMeasure<typename Space::Elem>& mu,
                    const WalkRun& run, VisitStep&& visit_step) {
  run.validate();
  mu.validate();
  std::uint64_t n_chunks = (run.samples + run.chunk_size - 1) / run.chunk_size;
  for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
    Rng rng = Rng::for_chunk(run.seed, chunk);
    std::uint64_t lo = chunk * run.chunk_size;
    std::uint64_t hi = std::min(run.samples, lo + run.chunk_size);
    for (std::uint64_t id = lo; id < hi; ++id) {
      typename Space::Elem g = sp.identity();
      for (int step = 1; step <= run.horizon; ++step) {
        detail::step_in_place(sp, g, mu.sample(rng));
        visit_step(id, step, g);
      }
    }
  }
}

// Streaming simulate: emits one record per sample, deterministically ordered.
template <class Space>
void simulate(const Space& sp, const FiniteMeasure<typename Space::Elem>& mu,
              const WalkRun& run, const std::function<void(const SampleRecord&)>& sink) {
  run_walk(sp, mu, run, [&](std::uint64_t id, const typename Space::Elem& g) {
    SampleRecord rec;
    rec.id = id;
    rec.d = sp.displacement(g);
    auto t = sp.translation_length(g);
    rec.tau = t ? *t : 0.0;
    if (run.want_ell) {
      auto br = stable_length(sp, g, run.ell_n_max);
      rec.ell_lo = br.last_term;
      rec.ell_hi = br.fekete_inf;
    }
    sink(rec);
  });
}

struct TailEstimate {
  std::string event;
  double x = 0;  // grid coordinate (n or R)
  std::uint64_t hits = 0, samples = 0;
  double log_p = kNegInf;  // point estimate; one-sided bound when censored
  WilsonInterval interval;
  bool censored = false;
};

inline TailEstimate make_tail_estimate(std::string event, double x, std::uint64_t hits,
                                       std::uint64_t samples) {
  TailEstimate e;
  e.event = std::move(event);
  e.x = x;
  e.hits = hits;
  e.samples = samples;
  e.interval = wilson(hits, samples);
  if (hits == 0) {
    e.censored = true;
    e.log_p = std::log(1.0 / (samples + 1.0));  // one-sided bound, not an estimate
  } else {
    e.log_p = std::log(static_cast<double>(hits) / samples);
  }
  return e;
}

struct ProbeResult {
  std::vector<TailEstimate> cells;
  std::optional<LineFit> fit;  // ln P vs grid coordinate over uncensored cells
  double extra = 0;            // probe-specific (e.g. mean normalized product)
};

inline void fit_probe(ProbeResult& r) {
  std::vector<double> xs, ys;
  for (const auto& c : r.cells)
    if (!c.censored) {
      xs.push_back(c.x);
      ys.push_back(c.log_p);
    }
  if (xs.size() >= 2) r.fit = least_squares(xs, ys);
}

// P(d(z_n, x) - d(z_0, x) <= eps n) on a grid of n.
template <class Space>
ProbeResult walking_away_probe(const Space& sp, const FiniteMeasure<typename Space::Elem>& mu,
                               const typename Space::Point& x, double eps,
                               const std::vector<int>& n_grid, const WalkRun& run) {
  if (!(eps > 0)) throw std::invalid_argument("walking_away_probe: eps > 0 required");
  auto z0 = sp.basepoint();
  double d0 = sp.dist(z0, x);
  int n_top = *std::max_element(n_grid.begin(), n_grid.end());
  WalkRun r = run;
  r.horizon = n_top;
  std::vector<std::uint64_t> hits(n_grid.size(), 0);
  run_walk_steps(sp, mu, r, [&](std::uint64_t, int step, const typename Space::Elem& g) {
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] != step) continue;
      double dn = sp.dist(sp.act(g, z0), x);
      if (dn - d0 <= eps * step + 1e-9) ++hits[i];
    }
  });
  ProbeResult res;
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    res.cells.push_back(make_tail_estimate("walk_away", n_grid[i], hits[i], run.samples));
  fit_probe(res);
  return res;
}

enum class GromovProbeMode { Intermediate, Punctual };

// Intermediate: (z_n, z_0)_{z_i} >= R.  Punctual: (z_p, x)_{z_0} >= R.
// All distances go through group elements, so far points stay accurate.
template <class Space>
ProbeResult gromov_deviation_probe(const Space& sp,
                                   const FiniteMeasure<typename Space::Elem>& mu,
                                   GromovProbeMode mode, int n, int i_or_p,
                                   const typename Space::Point& x,
                                   const std::vector<double>& r_grid, const WalkRun& run) {
  auto z0 = sp.basepoint();
  std::vector<std::uint64_t> hits(r_grid.size(), 0);
  double product_sum = 0;
  WalkRun r = run;

  if (mode == GromovProbeMode::Intermediate) {
    int i = i_or_p;
    if (i < 0 || i > n) throw std::invalid_argument("gromov_deviation_probe: 0 <= i <= n");
    r.horizon = n;
    typename Space::Elem snapshot = sp.identity();
    run_walk_steps(sp, mu, r, [&](std::uint64_t, int step, const typename Space::Elem& g) {
      if (step == i) snapshot = g;
      if (step != n) return;
      double di = sp.displacement(i == 0 ? sp.identity() : snapshot);
      double dn = sp.displacement(g);
      double dinc = sp.displacement(sp.compose(sp.inverse(snapshot), g));
      double prod = 0.5 * (di + dinc - dn);
      product_sum += prod;
      for (std::size_t k = 0; k < r_grid.size(); ++k)
        if (prod >= r_grid[k] - 1e-9) ++hits[k];
    });
  } else {
    int p = i_or_p;
    r.horizon = p;
    run_walk(sp, mu, r, [&](std::uint64_t, const typename Space::Elem& g) {
      double prod = gromov_product(sp, sp.act(g, z0), x, z0);
      product_sum += prod;
      for (std::size_t k = 0; k < r_grid.size(); ++k)
        if (prod >= r_grid[k] - 1e-9) ++hits[k];
    });
  }

  ProbeResult res;
  const char* name = mode == GromovProbeMode::Intermediate ? "gromov_intermediate"
                                                           : "gromov_punctual";
  for (std::size_t k = 0; k < r_grid.size(); ++k)
    res.cells.push_back(make_tail_estimate(name, r_grid[k], hits[k], run.samples));
  fit_probe(res);
  res.extra = product_sum / static_cast<double>(run.samples);  // mean product
  return res;
}

// Max over samples of |d_{mj} - sum_i d(z_{ij}, z_{(i-1)j}) + 2 sum_i (z0, z_{ij})_{z_{(i-1)j}}|.
template <class Space>
double chop_identity_check(const Space& sp, const FiniteMeasure<typename Space::Elem>& mu,
                           int n, int j, const WalkRun& run) {
  if (j < 1 || n % j != 0)
    throw std::invalid_argument("chop_identity_check: j must divide n");
  WalkRun r = run;
  r.horizon = n;
  double worst = 0;
  typename Space::Elem prev = sp.identity();
  double sum_inc = 0, sum_prod = 0;
  run_walk_steps(sp, mu, r, [&](std::uint64_t, int step, const typename Space::Elem& g) {
    if (step == 1) {  // new trajectory begins
      prev = sp.identity();
      sum_inc = 0;
      sum_prod = 0;
    }
    if (step % j != 0) return;
    double d_prev = sp.displacement(prev);
    double d_cur = sp.displacement(g);
    double d_inc = sp.displacement(sp.compose(sp.inverse(prev), g));
    sum_inc += d_inc;
    sum_prod += 0.5 * (d_prev + d_inc - d_cur);
    prev = g;
    if (step == n) {
      double rhs = sum_inc - 2.0 * sum_prod;
      worst = std::max(worst, std::fabs(d_cur - rhs));
    }
  });
  return worst;
}

}  // namespace ldw
