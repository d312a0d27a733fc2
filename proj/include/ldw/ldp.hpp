#pragma once

// Rate-function machinery: deviation-rate curves from exact DP or Monte Carlo,
// assembly into a convex rate function, the closed-form free-group rate,
// Legendre/Chernoff duality, and the translation-length sandwich checks.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ldw/exact_dp.hpp"
#include "ldw/stats.hpp"

namespace ldw {

constexpr double kPosInf = std::numeric_limits<double>::infinity();

struct RateCurve {
  Side direction = Side::Above;
  std::vector<double> alpha;
  std::vector<int> ns;
  // psi[i][j] = Psi_{ns[i]}(alpha[j]); +inf when P = 0, NaN when censored (MC
  // zero hits with unknown true value are reported via `censored`).
  std::vector<std::vector<double>> psi;
  std::vector<std::vector<bool>> censored;
};

inline RateCurve rate_curve_exact(int q, Side dir, std::vector<double> alphas,
                                  std::vector<int> ns) {
  RateCurve c;
  c.direction = dir;
  c.alpha = std::move(alphas);
  c.ns = std::move(ns);
  int n_top = *std::max_element(c.ns.begin(), c.ns.end());
  c.psi.resize(c.ns.size());
  c.censored.assign(c.ns.size(), std::vector<bool>(c.alpha.size(), false));
  dist_law_scan(q, n_top, [&](int n, const std::vector<double>& row) {
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
      if (c.ns[i] != n) continue;
      DistanceDistribution d;
      d.q = q;
      d.n = n;
      d.logp = row;
      for (double a : c.alpha) {
        double lp = deviation_prob(d, a, dir);
        c.psi[i].push_back(lp == kNegInf ? kPosInf : -lp / n);
      }
    }
  });
  return c;
}

// Rate curve from empirical per-sample values of d_n (one horizon).
inline RateCurve rate_curve_mc(const std::vector<double>& d_samples, int n, Side dir,
                               std::vector<double> alphas) {
  RateCurve c;
  c.direction = dir;
  c.alpha = std::move(alphas);
  c.ns = {n};
  c.psi.resize(1);
  c.censored.resize(1);
  for (double a : c.alpha) {
    std::size_t hits = 0;
    for (double d : d_samples) {
      bool hit = dir == Side::Above ? d >= a * n - 1e-9 : d <= a * n + 1e-9;
      hits += hit ? 1 : 0;
    }
    if (hits == 0) {
      // one-sided bound, not a point estimate
      c.psi[0].push_back(-std::log(1.0 / (d_samples.size() + 1.0)) / n);
      c.censored[0].push_back(true);
    } else {
      c.psi[0].push_back(-std::log(static_cast<double>(hits) / d_samples.size()) / n);
      c.censored[0].push_back(false);
    }
  }
  return c;
}

struct RateFunction {
  std::vector<double> alpha;
  std::vector<double> value;  // +inf sentinel outside the effective support
  std::string provenance;
  bool convex_ok = false;
  double worst_midpoint_violation = 0;
};

// Discrete midpoint-convexity check on the finite part of the grid.
inline std::pair<bool, double> check_convexity(const std::vector<double>& alpha,
                                               const std::vector<double>& value,
                                               double tol) {
  double worst = 0;
  for (std::size_t i = 1; i + 1 < alpha.size(); ++i) {
    if (value[i - 1] == kPosInf || value[i] == kPosInf || value[i + 1] == kPosInf) continue;
    double h1 = alpha[i] - alpha[i - 1], h2 = alpha[i + 1] - alpha[i];
    double interp = (h2 * value[i - 1] + h1 * value[i + 1]) / (h1 + h2);
    worst = std::max(worst, value[i] - interp);
  }
  return {worst <= tol, worst};
}

// I = below-curve left of the drift, above-curve right of it, 0 at the drift.
// Uses the last (largest-n) row of each curve; grids must agree.
inline RateFunction assemble_rate(const RateCurve& above, const RateCurve& below,
                                  double drift) {
  if (above.alpha != below.alpha)
    throw std::invalid_argument("assemble_rate: incompatible grids");
  RateFunction f;
  f.alpha = above.alpha;
  f.provenance = "assembled(n=" + std::to_string(above.ns.back()) + ")";
  const auto& up = above.psi.back();
  const auto& lo = below.psi.back();
  for (std::size_t i = 0; i < f.alpha.size(); ++i) {
    double a = f.alpha[i];
    double v;
    if (std::fabs(a - drift) < 1e-12)
      v = 0.0;
    else if (a < drift)
      v = lo[i];
    else
      v = up[i];
    f.value.push_back(v);
  }
  double step = f.alpha.size() > 1 ? f.alpha[1] - f.alpha[0] : 0.0;
  auto [ok, worst] = check_convexity(f.alpha, f.value, 1e-6 + 2 * step * step);
  f.convex_ok = ok;
  f.worst_midpoint_violation = worst;
  return f;
}

// Closed-form rate function of the standard walk on F_q on [0, 1].
inline double analytic_rate_free(int q, double a) {
  require_rank(q);
  if (a < 0 || a > 1) return kPosInf;
  auto xlnx = [](double x) { return x <= 0 ? 0.0 : x * std::log(x); };
  return 0.5 * xlnx(1 + a) + 0.5 * xlnx(1 - a) + std::log(static_cast<double>(q)) -
         0.5 * (1 + a) * std::log(2.0 * q - 1.0);
}

inline double free_group_drift(int q) { return (q - 1.0) / q; }

// Discrete Legendre transform: out[j] = sup_i (lambda[j] * x[i] - f[i]).
inline std::vector<double> legendre(const std::vector<double>& xs,
                                    const std::vector<double>& fs,
                                    const std::vector<double>& lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    double best = -kPosInf;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (fs[i] == kPosInf) continue;
      best = std::max(best, lam * xs[i] - fs[i]);
    }
    out.push_back(best);
  }
  return out;
}

// Chernoff lower bound on the upper deviation rate:
// sup_{lambda >= 0 in grid} (lambda a - Lambda_n(lambda)).
inline double chernoff_upper(double a, const std::vector<double>& lambdas,
                             const std::vector<double>& mgf_values) {
  double best = -kPosInf;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0) continue;
    best = std::max(best, lambdas[i] * a - mgf_values[i]);
  }
  return best;
}

// Verbatim check of the two tau/distance sandwich inequalities.
struct TauSandwichReport {
  // Below: P(tau_n <= alpha n) <= (n+1) P(d_n <= (alpha+eps) n), per n.
  std::vector<int> ns;
  std::vector<bool> below_holds;
  // Above: c P(d_n >= (alpha+eps) n) <= P(tau_{n+p} >= alpha (n+p)); fitted
  // smallest p (with positive fitted c) and the fitted c = min ratio.
  int fitted_p = -1;
  double fitted_c = 0;
  bool above_holds = false;
};

// ns_below: horizons for the verbatim below-inequality. ns_above: (sparser)
// horizons over which (c, p) is fitted for the above-inequality.
inline TauSandwichReport tau_sandwich_check(int q, const std::vector<int>& ns_below,
                                            const std::vector<int>& ns_above, double alpha,
                                            double eps, int p_max = 16) {
  TauSandwichReport rep;
  rep.ns = ns_below;
  int n_top = *std::max_element(ns_below.begin(), ns_below.end());
  for (int n : ns_above) n_top = std::max(n_top, n + p_max);

  auto logC = log_cyclically_reduced_counts(q, n_top);

  // One scan; per-n quantities captured on the fly.
  std::vector<bool> want_below(n_top + 1, false), want_above(n_top + 1, false);
  for (int n : ns_below) want_below[n] = true;
  for (int n : ns_above)
    for (int p = 0; p <= p_max; ++p) want_above[n + p] = true;

  std::vector<double> log_tau_up(n_top + 1, kNegInf);   // ln P(tau_m >= alpha m)
  std::vector<double> log_d_up(n_top + 1, kNegInf);     // ln P(d_n >= (alpha+eps) n)
  dist_law_scan(q, n_top, [&](int n, const std::vector<double>& row) {
    DistanceDistribution d{q, n, row};
    if (want_below[n]) {
      TauDistribution t = tau_law_from(d, logC);
      double lhs = t.log_tail_lower(alpha * n);
      double rhs = std::log(n + 1.0) + d.log_tail_lower((alpha + eps) * n);
      rep.below_holds.push_back(lhs <= rhs + 1e-12);
    }
    if (want_above[n]) {
      TauDistribution t = tau_law_from(d, logC);
      log_tau_up[n] = t.log_tail_upper(alpha * n);
    }
    log_d_up[n] = d.log_tail_upper((alpha + eps) * n);
  });

  for (int p = 0; p <= p_max && rep.fitted_p < 0; ++p) {
    double cmin = kPosInf;
    bool ok = true;
    for (int n : ns_above) {
      double num = log_tau_up[n + p];
      double den = log_d_up[n];
      if (den == kNegInf) continue;  // vacuous
      if (num == kNegInf) {
        ok = false;
        break;
      }
      cmin = std::min(cmin, std::exp(num - den));
    }
    if (ok && cmin > 0 && cmin != kPosInf) {
      rep.fitted_p = p;
      rep.fitted_c = cmin;
      rep.above_holds = true;
    }
  }
  return rep;
}

// Fits the smallest (c, p) for the almost-subadditivity display
// P(d_{m+n+p} >= x + y - c) >= c^{-1} P(d_m >= x) P(d_n >= y) over a grid.
struct UpperSubadditivityFit {
  int p = -1;
  double c = 0;
  bool holds = false;
};

inline UpperSubadditivityFit fit_upper_subadditivity(int q, const std::vector<int>& mns,
                                                     const std::vector<double>& fractions,
                                                     int p_max = 16, double c_max = 64.0) {
  int top = 0;
  for (int m : mns) top = std::max(top, m);
  int n_top = 2 * top + p_max;
  std::vector<DistanceDistribution> laws(n_top + 1);
  dist_law_scan(q, n_top, [&](int n, const std::vector<double>& row) {
    laws[n] = DistanceDistribution{q, n, row};
  });

  for (int p = 0; p <= p_max; ++p) {
    // smallest c on a half-integer grid that makes every cell pass
    for (double c = 1.0; c <= c_max; c += 0.5) {
      bool ok = true;
      for (int m : mns) {
        for (int n : mns) {
          for (double fx : fractions) {
            for (double fy : fractions) {
              double x = fx * m, y = fy * n;
              double lhs = laws[m + n + p].log_tail_upper(x + y - c);
              double rhs = -std::log(c) + laws[m].log_tail_upper(x) +
                           laws[n].log_tail_upper(y);
              if (lhs + 1e-12 < rhs) {
                ok = false;
                goto done_cell;
              }
            }
          }
        }
      }
    done_cell:
      if (ok) return {p, c, true};
    }
  }
  return {};
}

}  // namespace ldw
