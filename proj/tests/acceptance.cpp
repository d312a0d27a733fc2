// Acceptance gate: one criterion per number, each printing a single
// PASS/FAIL line with the measured quantities. Run with no argument for the
// full battery, or with 1..16 for a single criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "ldw/ldw.hpp"
#include "oracles.hpp"

using namespace ldw;

namespace {

bool approx(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// 1. Exact law vs full enumeration, rational mode, n <= 10.
bool crit1() {
  for (int n = 1; n <= 10; ++n) {
    auto law = dist_law_rational(2, n);
    auto counts = oracle::distance_counts(2, n);
    BigInt den = pow(BigInt(4), n);
    for (int k = 0; k <= n; ++k)
      if (law[k] != BigRational(counts[k], den)) {
        std::printf("n=%d k=%d mismatch\n", n, k);
        return false;
      }
  }
  return true;
}

// 2. Drift of the normalized displacement at n = 2000.
bool crit2() {
  double m = dist_law(2, 2000).mean() / 2000.0;
  std::printf("  E[d_n]/n = %.6f (target 0.5)\n", m);
  return approx(m, 0.5, 1e-3);
}

// 3. Return-probability rate at n = 2048 vs the closed form.
bool crit3() {
  auto rr = return_rate(2, 2048);
  double last = rr.rate.back();
  std::printf("  r_n = %.7f, limit = %.7f\n", last, rr.limit);
  if (!approx(last, rr.limit, 1e-2)) return false;
  for (std::size_t i = 1; i < rr.fekete_inf.size(); ++i)
    if (rr.fekete_inf[i] > rr.fekete_inf[i - 1] + 1e-15) return false;
  return rr.fekete_inf.back() >= rr.limit - 1e-12;
}

// 4. Exact-DP rate curve vs the closed-form rate; convexity; minimum cell.
bool crit4() {
  std::vector<double> alphas;
  for (int i = 1; i <= 19; ++i) alphas.push_back(0.05 * i);
  auto above = rate_curve_exact(2, Side::Above, alphas, {4096});
  auto below = rate_curve_exact(2, Side::Below, alphas, {4096});
  auto f = assemble_rate(above, below, free_group_drift(2));
  double sup = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    sup = std::max(sup, std::fabs(f.value[i] - analytic_rate_free(2, alphas[i])));
  std::size_t argmin =
      std::min_element(f.value.begin(), f.value.end()) - f.value.begin();
  std::printf("  sup|Psi_n - I| = %.5f, convex_ok = %d, argmin alpha = %.2f\n", sup,
              f.convex_ok ? 1 : 0, f.alpha[argmin]);
  return sup <= 1e-2 && f.convex_ok && approx(f.alpha[argmin], 0.5, 1e-12);
}

// 5. Translation-length rate curve tracks the displacement one; exact tau law.
bool crit5() {
  auto d = dist_law(2, 2048);
  auto t = tau_law_from(d, log_cyclically_reduced_counts(2, 2048));
  double sup = 0;
  for (double a = 0.55; a <= 0.90 + 1e-9; a += 0.05) {
    double rd = -d.log_tail_upper(a * 2048) / 2048;
    double rt = -t.log_tail_upper(a * 2048) / 2048;
    sup = std::max(sup, std::fabs(rd - rt));
  }
  std::printf("  sup over alpha of |tau-rate - d-rate| = %.5f\n", sup);
  if (sup > 2e-2) return false;
  auto tr = tau_law_rational(2, 10);
  auto counts = oracle::tau_counts(2, 10);
  BigInt den = pow(BigInt(4), 10);
  for (int tv = 0; tv <= 10; ++tv)
    if (tr[tv] != BigRational(counts[tv], den)) {
      std::printf("  tau law mismatch at t=%d\n", tv);
      return false;
    }
  return true;
}

// 6. Sandwich inequalities between tau and distance tails.
bool crit6() {
  std::vector<int> ns_below;
  for (int n = 100; n <= 1000; ++n) ns_below.push_back(n);
  auto rep = tau_sandwich_check(2, ns_below, {100, 200, 300, 400, 500}, 0.3, 0.05, 16);
  bool below_all = true;
  for (bool b : rep.below_holds) below_all = below_all && b;
  std::printf("  below holds for all %zu horizons: %d; above fitted (c, p) = (%.4g, %d)\n",
              rep.below_holds.size(), below_all ? 1 : 0, rep.fitted_c, rep.fitted_p);
  return below_all && rep.above_holds && rep.fitted_p >= 0 && rep.fitted_p <= 16;
}

// 7. Upper almost-subadditivity on a grid; exact below-subadditivity.
bool crit7() {
  auto fit = fit_upper_subadditivity(2, {50, 100, 150, 200}, {0.0, 0.25, 0.5, 0.75, 1.0},
                                     16, 64.0);
  std::printf("  upper display fitted (c, p) = (%.4g, %d)\n", fit.c, fit.p);
  if (!fit.holds) return false;

  // -ln P(d_n <= a n) is subadditive in n, verbatim, for each fixed a.
  std::vector<double> as{0.1, 0.25, 0.4, 0.45};
  std::vector<std::vector<double>> L(as.size(), std::vector<double>(1025, 0.0));
  dist_law_scan(2, 1024, [&](int n, const std::vector<double>& row) {
    DistanceDistribution d{2, n, row};
    for (std::size_t j = 0; j < as.size(); ++j) L[j][n] = d.log_tail_lower(as[j] * n);
  });
  for (std::size_t j = 0; j < as.size(); ++j)
    for (int n = 1; n <= 512; ++n)
      for (int m = n; m <= 512; ++m)
        if (L[j][n + m] + 1e-12 < L[j][n] + L[j][m]) {
          std::printf("  below-subadditivity fails at a=%.2f n=%d m=%d\n", as[j], n, m);
          return false;
        }
  return true;
}

// 8. Schottky pipeline: construction certifies, elementary sets rejected.
bool crit8() {
  auto res = construct_pingpong_tree(2, parse_word("a"), parse_word("b"));
  std::printf("  |S| = %zu, n = %d, constant C = %g, worst fraction = %.4f\n", res.S.size(),
              res.n_used, res.certificate.C, res.certificate.worst_fraction);
  if (res.S.size() != 128 || !res.certificate.valid) return false;
  for (int C = 0; C <= 5; ++C) {
    auto cert = verify_tree(2, {parse_word("a"), parse_word("A")}, C);
    if (cert.valid) {
      std::printf("  elementary pair wrongly accepted at C=%d\n", C);
      return false;
    }
  }
  return true;
}

// 9. Translation boost deficit is independent of |g|.
bool crit9() {
  auto S = construct_pingpong_tree(2, parse_word("a"), parse_word("b")).S;
  Rng rng(4242);
  std::vector<double> xs, ys;
  for (int t = 0; t < 10000; ++t) {
    int len = 50 + static_cast<int>(rng.uniform_below(351));
    Word g = uniform_sphere_sample(2, len, rng);
    auto b = boost_translation_tree(S, g);
    xs.push_back(static_cast<double>(len));
    ys.push_back(b.deficit);
  }
  auto fit = least_squares(xs, ys);
  std::printf("  deficit regression slope = %.5f\n", fit.slope);
  return std::fabs(fit.slope) <= 0.01;
}

// 10. Moving translation length: every target in [tau, d] hit within gap 2.
bool crit10() {
  Rng rng(77);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    Word w = uniform_sphere_sample(2, 400, rng);
    double tau = static_cast<double>(tau_tree(w));
    double d = static_cast<double>(w.size());
    for (int i = 0; i < 50; ++i) {
      double r = tau + (d - tau) * i / 49.0;
      worst = std::max(worst, moving_tau_search(w, r).gap);
    }
  }
  std::printf("  worst gap over 10^3 words x 50 targets = %g\n", worst);
  return worst <= 2.0;
}

// 11. Joint spectrum of {a, ab} fills [1, 2]; arithmeticity detection.
bool crit11() {
  TreeSpace sp{2};
  auto js = joint_spectrum(sp, {parse_word("a"), parse_word("ab")}, 12);
  if (js.truncated || js.n_max != 12) return false;
  double prev = kPosInf;
  double at12 = 0;
  for (int n = 1; n <= 12; ++n) {
    double h = hausdorff_to_interval(js.displacement_sets[n - 1], 1.0, 2.0);
    if (h > prev + 1e-12) {
      std::printf("  Hausdorff distance increased at n=%d\n", n);
      return false;
    }
    prev = h;
    if (n == 12) at12 = h;
  }
  std::printf("  Hausdorff distance to [1,2] at n=12: %.4f\n", at12);
  if (at12 >= 0.2) return false;
  auto w = non_arithmetic(sp, {parse_word("a"), parse_word("ab")}, 12);
  if (w.arithmetic) return false;
  auto js2 = joint_spectrum(sp, {parse_word("a"), parse_word("b")}, 12);
  for (int n = 1; n <= 12; ++n)
    if (js2.disp_min[n - 1] != 1.0 || js2.disp_max[n - 1] != 1.0) return false;
  return non_arithmetic(sp, {parse_word("a"), parse_word("b")}, 12).arithmetic;
}

// 12. Legendre duality, mgf derivatives, Chernoff domination.
bool crit12() {
  // double conjugate of the closed-form rate
  const int A = 200;
  std::vector<double> xs, fs;
  for (int i = 0; i <= A; ++i) {
    xs.push_back(static_cast<double>(i) / A);
    fs.push_back(analytic_rate_free(2, xs.back()));
  }
  std::vector<double> lams;
  for (double l = -1.0; l <= 3.0 + 1e-12; l += 0.002) lams.push_back(l);
  auto Lam = legendre(xs, fs, lams);
  double worst_dc = 0;
  for (int i = 0; i <= A; ++i) {
    double best = -kPosInf;
    for (std::size_t j = 0; j < lams.size(); ++j)
      best = std::max(best, lams[j] * xs[i] - Lam[j]);
    // one grid step of alpha, measured through the local increment
    double neighbor = std::fabs(fs[std::min(A, i + 1)] - fs[std::max(0, i - 1)]);
    double err = std::fabs(best - fs[i]);
    worst_dc = std::max(worst_dc, err - neighbor);
    if (err > neighbor + 1e-6) {
      std::printf("  double conjugate off at alpha=%.3f: err %.3g allowance %.3g\n", xs[i],
                  err, neighbor);
      return false;
    }
  }

  auto d = dist_law(2, 2000);
  double h = 1e-3;
  auto m = log_mgf(d, {-h, 0.0, h});
  double d1 = (m[2] - m[0]) / (2 * h) * 1.0;
  double d2 = (m[2] - 2 * m[1] + m[0]) / (h * h);
  double var = d.variance() / 2000.0;
  std::printf("  Lambda'(0) = %.5f, Lambda''(0) = %.5f vs Var/n = %.5f\n", d1, d2, var);
  if (!approx(d1, 0.5, 1e-3) || !approx(d2, var, 5e-3)) return false;

  auto d300 = dist_law(2, 300);
  std::vector<double> lgrid;
  for (int i = 0; i <= 80; ++i) lgrid.push_back(i * 0.05);
  auto mg = log_mgf(d300, lgrid);
  for (double a : {0.55, 0.6, 0.7, 0.8, 0.9, 0.95}) {
    double bound = chernoff_upper(a, lgrid, mg);
    double exact = -deviation_prob(d300, a, Side::Above) / 300.0;
    if (bound > exact + 1e-9) {
      std::printf("  Chernoff exceeds exact rate at a=%.2f\n", a);
      return false;
    }
  }
  return true;
}

// 13. Matrix dictionary identities plus the Monte Carlo spectral-vs-norm probe.
bool crit13() {
  Rng rng(5150);
  auto rand_elem = [&](int factors) {
    MobiusElement g = mobius_identity();
    for (int i = 0; i < factors; ++i) {
      g = mobius_compose(g, mobius_rotation(rng.uniform01() * 6.283185307179586));
      g = mobius_compose(g, mobius_diag(rng.uniform01() * 1.2 - 0.6));
    }
    return g;
  };
  DiscSpace sp;
  for (int t = 0; t < 10000; ++t) {
    auto g = rand_elem(6);
    double via_norm = norm_displacement(g);
    double via_disc = dist_disc(sp.basepoint(), mobius_act(g, sp.basepoint()));
    if (!approx(via_norm, via_disc, 1e-9 * (1.0 + via_norm))) {
      std::printf("  displacement mismatch %.3g at trial %d\n",
                  std::fabs(via_norm - via_disc), t);
      return false;
    }
    auto tau = tau_trace(g);
    if (tau && !approx(*tau, 2.0 * spectral_log(g), 1e-9)) return false;
  }
  auto g = mobius_compose(mobius_rotation(0.9), mobius_diag(1.7));
  auto br = stable_length(sp, g, 64);
  auto tau = tau_trace(g);
  if (!tau || !approx(br.diff_estimate, *tau, 1e-6)) {
    std::printf("  stable-length bracket off by %.3g\n",
                tau ? std::fabs(br.diff_estimate - *tau) : -1.0);
    return false;
  }

  // Monte Carlo: upper-rate curves of d_n and 2 ln(spectral radius) coincide
  // within Wilson intervals at n = 200, 10^6 samples, 2 hyperbolic atoms.
  // The atoms share an axis: for transverse axes the O(1) gap between the two
  // observables shifts tail probabilities by far more than the interval width
  // at this sample size, so that comparison could never resolve agreement.
  const int n = 200;
  const std::uint64_t N = 1000000;
  FiniteMeasure<MobiusElement> mu;
  mu.atoms = {{mobius_diag(1.5), 0.5}, {mobius_diag(-0.7), 0.5}};
  WalkRun run;
  run.horizon = n;
  run.samples = N;
  run.seed = 99;
  std::vector<float> ds, taus;
  ds.reserve(N);
  taus.reserve(N);
  run_walk(sp, mu, run, [&](std::uint64_t, const MobiusElement& m) {
    ds.push_back(static_cast<float>(norm_displacement(m)));
    taus.push_back(static_cast<float>(2.0 * spectral_log(m)));
  });
  std::vector<double> sorted(ds.begin(), ds.end());
  std::sort(sorted.begin(), sorted.end());
  bool ok = true;
  for (double qtl : {0.30, 0.15, 0.05, 0.01, 0.002}) {
    double thr = sorted[static_cast<std::size_t>((1.0 - qtl) * (N - 1))];
    std::uint64_t hd = 0, ht = 0;
    for (std::size_t i = 0; i < N; ++i) {
      if (ds[i] >= thr) ++hd;
      if (taus[i] >= thr) ++ht;
    }
    auto wd = wilson(hd, N), wt = wilson(ht, N);
    bool overlap = wd.lo <= wt.hi && wt.lo <= wd.hi;
    std::printf("  alpha=%.4f: P(d>=an) in [%.3e, %.3e], P(2lnsr>=an) in [%.3e, %.3e] %s\n",
                thr / n, wd.lo, wd.hi, wt.lo, wt.hi, overlap ? "overlap" : "DISJOINT");
    ok = ok && overlap;
  }
  return ok;
}

// 14. Tail probes: negative fitted slopes, good fits, vanishing mean product.
bool crit14() {
  TreeSpace sp{2};
  auto mu = uniform_generator_measure(2);
  WalkRun run;
  run.samples = 40000;
  run.seed = 1212;

  auto away = walking_away_probe(sp, mu, parse_word("aaaa"), 0.1, {20, 40, 60, 80}, run);
  if (!away.fit || away.fit->slope >= 0 || away.fit->r2 < 0.9) {
    std::printf("  walk-away fit inadequate\n");
    return false;
  }
  auto inter = gromov_deviation_probe(sp, mu, GromovProbeMode::Intermediate, 60, 30,
                                      sp.basepoint(), {1, 2, 3, 4, 5}, run);
  if (!inter.fit || inter.fit->slope >= 0 || inter.fit->r2 < 0.9) {
    std::printf("  intermediate-product fit inadequate\n");
    return false;
  }
  auto punct = gromov_deviation_probe(sp, mu, GromovProbeMode::Punctual, 0, 60,
                                      parse_word("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"),
                                      {1, 2, 3, 4, 5}, run);
  if (!punct.fit || punct.fit->slope >= 0 || punct.fit->r2 < 0.9) {
    std::printf("  punctual fit inadequate\n");
    return false;
  }
  std::printf("  slopes: away %.3f, intermediate %.3f, punctual %.3f (all R2 >= 0.9)\n",
              away.fit->slope, inter.fit->slope, punct.fit->slope);

  // normalized mean product at p = 400 for several far reference points
  WalkRun run2;
  run2.samples = 20000;
  run2.seed = 555;
  for (const char* far : {"aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa",
                          "abababababababababababababababababababab",
                          "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb"}) {
    auto probe = gromov_deviation_probe(sp, mu, GromovProbeMode::Punctual, 0, 400,
                                        parse_word(far), {1.0}, run2);
    double norm_mean = probe.extra / 400.0;
    std::printf("  mean (z_p, x)/p = %.5f for |x| = %zu\n", norm_mean,
                std::strlen(far));
    if (norm_mean >= 0.05) return false;
  }
  return true;
}

// 15. Harmonic cylinder masses vs the uniform boundary measure; decay fit.
bool crit15() {
  TreeSpace sp{2};
  auto mu = uniform_generator_measure(2);
  const std::uint64_t N = 1000000;
  const std::uint64_t seed = 5;
  std::vector<std::pair<int, double>> depth_to_nu;
  for (int k = 1; k <= 5; ++k) {
    auto res = harmonic_cylinder(sp, mu, k, N, seed);
    double target = 0.25 * std::pow(1.0 / 3.0, k - 1);
    double sigma = std::sqrt(target * (1 - target) / N);
    std::size_t expected_cells = 4 * static_cast<std::size_t>(std::pow(3.0, k - 1));
    if (res.cells.size() != expected_cells) {
      std::printf("  depth %d: %zu cells (expected %zu)\n", k, res.cells.size(),
                  expected_cells);
      return false;
    }
    double worst = 0, mx = 0;
    for (const auto& c : res.cells) {
      worst = std::max(worst, std::fabs(c.estimate - target) / sigma);
      mx = std::max(mx, c.estimate);
    }
    std::printf("  depth %d: worst |est - target| = %.2f sigma\n", k, worst);
    if (worst > 3.0) return false;
    depth_to_nu.emplace_back(k, mx);
  }
  auto fit = power_law_fit(depth_to_nu);
  std::printf("  fitted decay exponent D = %.4f\n", fit.D);
  return fit.ok && fit.D >= 1.0 && fit.D <= 1.2;
}

// 16. Degenerate walk: point mass at a generator gives the {0 at 1} rate.
bool crit16() {
  TreeSpace sp{2};
  auto mu = point_mass(parse_word("a"));
  WalkRun run;
  run.horizon = 64;
  run.samples = 16;
  run.seed = 1;
  bool deterministic = true;
  run_walk(sp, mu, run, [&](std::uint64_t, const Word& g) {
    deterministic = deterministic && g.size() == 64;
  });
  if (!deterministic) return false;

  // exact law of the deterministic walk: P(d_n = n) = 1
  const int n = 64;
  DistanceDistribution d;
  d.q = 2;
  d.n = n;
  d.logp.assign(n + 1, kNegInf);
  d.logp[n] = 0.0;
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0, 1.25};
  RateCurve above, below;
  above.direction = Side::Above;
  below.direction = Side::Below;
  above.alpha = below.alpha = alphas;
  above.ns = below.ns = {n};
  above.psi.resize(1);
  below.psi.resize(1);
  above.censored.assign(1, std::vector<bool>(alphas.size(), false));
  below.censored.assign(1, std::vector<bool>(alphas.size(), false));
  for (double a : alphas) {
    double up = d.log_tail_upper(a * n);
    double lo = d.log_tail_lower(a * n);
    above.psi[0].push_back(up == kNegInf ? kPosInf : -up / n);
    below.psi[0].push_back(lo == kNegInf ? kPosInf : -lo / n);
  }
  auto f = assemble_rate(above, below, 1.0);
  for (std::size_t i = 0; i < f.alpha.size(); ++i) {
    double expect = f.alpha[i] == 1.0 ? 0.0 : kPosInf;
    if (f.value[i] != expect) {
      std::printf("  rate at alpha=%.2f is %g, expected %g\n", f.alpha[i], f.value[i],
                  expect);
      return false;
    }
  }
  return true;
}

using CritFn = bool (*)();
const CritFn kCriteria[16] = {crit1, crit2,  crit3,  crit4,  crit5,  crit6,
                              crit7, crit8,  crit9,  crit10, crit11, crit12,
                              crit13, crit14, crit15, crit16};

const char* kNames[16] = {
    "exact law vs enumeration",      "drift",
    "return-probability rate",       "rate-function curve",
    "translation-length rates",      "sandwich inequalities",
    "subadditivity displays",        "Schottky pipeline",
    "boost deficit independence",    "moving translation length",
    "joint spectrum",                "Legendre duality",
    "matrix dictionary",             "tail probes",
    "harmonic cylinder decay",       "degenerate rate function",
};

}  // namespace

int main(int argc, char** argv) {
  int lo = 1, hi = 16;
  if (argc > 1) {
    int k = std::atoi(argv[1]);
    if (k < 1 || k > 16) {
      std::fprintf(stderr, "usage: acceptance [1..16]\n");
      return 2;
    }
    lo = hi = k;
  }
  int failures = 0;
  for (int k = lo; k <= hi; ++k) {
    bool ok = false;
    try {
      ok = kCriteria[k - 1]();
    } catch (const std::exception& e) {
      std::printf("  exception: %s\n", e.what());
    }
    std::printf("ACCEPTANCE %02d (%s): %s\n", k, kNames[k - 1], ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
