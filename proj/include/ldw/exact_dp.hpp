#pragma once

// Exact laws of the uniform-generator walk on F_q. The distance process is a
// birth-death chain on {0, 1, ...}: from k > 0 step +1 w.p. (2q-1)/2q and -1
// w.p. 1/2q; from 0 step +1 w.p. 1. Everything runs in log space by default;
// an exact big-rational mode backs the oracle tests and the CLI rational mode.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ldw/free_group.hpp"
#include "ldw/stats.hpp"

namespace ldw {

using BigRational = boost::multiprecision::cpp_rational;

struct DistanceDistribution {
  int q = 2;
  int n = 0;
  std::vector<double> logp;  // ln P(d_n = k), k = 0..n; -inf off-parity

  double log_prob(int k) const {
    if (k < 0 || k > n) return kNegInf;
    return logp[k];
  }

  // ln P(d_n >= x) for a real threshold.
  double log_tail_upper(double x) const {
    int k0 = std::max(0, static_cast<int>(std::ceil(x - 1e-9)));
    double acc = kNegInf;
    for (int k = n; k >= k0; --k) acc = logaddexp(acc, logp[k]);
    return acc;
  }

  // ln P(d_n <= x).
  double log_tail_lower(double x) const {
    int k0 = std::min(n, static_cast<int>(std::floor(x + 1e-9)));
    double acc = kNegInf;
    for (int k = 0; k <= k0; ++k) acc = logaddexp(acc, logp[k]);
    return acc;
  }

  double mean() const {
    double s = 0;
    for (int k = 0; k <= n; ++k)
      if (logp[k] != kNegInf) s += k * std::exp(logp[k]);
    return s;
  }

  double variance() const {
    double m = mean(), s = 0;
    for (int k = 0; k <= n; ++k)
      if (logp[k] != kNegInf) s += (k - m) * (k - m) * std::exp(logp[k]);
    return s;
  }
};

namespace detail {

// One DP step in log space.
inline void dist_law_step(int q, int n_cur, std::vector<double>& row) {
  const double lup = std::log((2.0 * q - 1.0) / (2.0 * q));
  const double ldn = -std::log(2.0 * q);
  std::vector<double> next(n_cur + 2, kNegInf);
  for (int k = 0; k <= n_cur; ++k) {
    if (row[k] == kNegInf) continue;
    double step_up = (k == 0) ? 0.0 : lup;
    next[k + 1] = logaddexp(next[k + 1], row[k] + step_up);
    if (k > 0) next[k - 1] = logaddexp(next[k - 1], row[k] + ldn);
  }
  row = std::move(next);
}

}  // namespace detail

// Scans n = 1..n_max, invoking visit(n, row) on each intermediate law.
inline void dist_law_scan(int q, int n_max,
                          const std::function<void(int, const std::vector<double>&)>& visit) {
  require_rank(q);
  if (n_max < 1) throw std::invalid_argument("dist_law_scan: n_max >= 1");
  std::vector<double> row(1, 0.0);  // P(d_0 = 0) = 1
  for (int n = 1; n <= n_max; ++n) {
    detail::dist_law_step(q, n - 1, row);
    visit(n, row);
  }
}

inline DistanceDistribution dist_law(int q, int n, int cap = 200000) {
  if (n > cap) throw std::invalid_argument("dist_law: cap exceeded");
  DistanceDistribution d;
  d.q = q;
  d.n = n;
  dist_law_scan(q, n, [&](int m, const std::vector<double>& row) {
    if (m == n) d.logp = row;
  });
  return d;
}

// Exact rational law; denominator is (2q)^n.
inline std::vector<BigRational> dist_law_rational(int q, int n) {
  require_rank(q);
  std::vector<BigRational> row(1, 1);
  BigRational up(2 * q - 1, 2 * q), dn(1, 2 * q);
  for (int step = 0; step < n; ++step) {
    std::vector<BigRational> next(row.size() + 1, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] == 0) continue;
      next[k + 1] += row[k] * (k == 0 ? BigRational(1) : up);
      if (k > 0) next[k - 1] += row[k] * dn;
    }
    row = std::move(next);
  }
  return row;
}

// The sequence r_n = -(1/2n) ln P(d_{2n} = 0), n = 1..n_max, converging to
// -ln(sqrt(2q-1)/q), together with the running Fekete infimum.
struct ReturnRate {
  std::vector<double> rate;        // r_n
  std::vector<double> fekete_inf;  // min_{m <= n} r_m
  double limit = 0;                // -ln(sqrt(2q-1)/q)
};

inline ReturnRate return_rate(int q, int n_max) {
  require_rank(q);
  ReturnRate out;
  out.limit = -std::log(std::sqrt(2.0 * q - 1.0) / q);
  out.rate.reserve(n_max);
  dist_law_scan(q, 2 * n_max, [&](int m, const std::vector<double>& row) {
    if (m % 2 != 0) return;
    double r = -row[0] / m;
    out.rate.push_back(r);
    double prev = out.fekete_inf.empty() ? r : std::min(out.fekete_inf.back(), r);
    out.fekete_inf.push_back(prev);
  });
  return out;
}

struct TauDistribution {
  int q = 2;
  int n = 0;
  std::vector<double> logp;  // ln P(tau(gamma_n) = t), t = 0..n

  double log_tail_upper(double x) const {
    int t0 = std::max(0, static_cast<int>(std::ceil(x - 1e-9)));
    double acc = kNegInf;
    for (int t = n; t >= t0; --t) acc = logaddexp(acc, logp[t]);
    return acc;
  }
  double log_tail_lower(double x) const {
    int t0 = std::min(n, static_cast<int>(std::floor(x + 1e-9)));
    double acc = kNegInf;
    for (int t = 0; t <= t0; ++t) acc = logaddexp(acc, logp[t]);
    return acc;
  }
};

// Exact law of tau(gamma_n) via sphere uniformity: conditioned on d_n = k the
// position is uniform on the sphere of radius k (the 2q-regular tree is
// distance-transitive), so P(tau = t) mixes U(k, m)/N(k) over k = t + 2m.
// logC must cover lengths up to d.n.
inline TauDistribution tau_law_from(const DistanceDistribution& d,
                                    const std::vector<double>& logC) {
  const int q = d.q;
  const int n = d.n;
  const double log2qm2 = std::log(2.0 * q - 2.0);
  const double log2qm1 = std::log(2.0 * q - 1.0);

  TauDistribution t;
  t.q = q;
  t.n = n;
  t.logp.assign(n + 1, kNegInf);
  t.logp[0] = d.logp[0];  // only the identity has empty cyclic reduction
  for (int tv = 1; tv <= n; ++tv) {
    double acc = kNegInf;
    for (int m = 0; tv + 2 * m <= n; ++m) {
      int k = tv + 2 * m;
      if (d.logp[k] == kNegInf) continue;
      double logU = logC[tv] + (m == 0 ? 0.0 : log2qm2 + (m - 1) * log2qm1);
      double logN = log_sphere_count(q, k);
      acc = logaddexp(acc, d.logp[k] + logU - logN);
    }
    t.logp[tv] = acc;
  }
  return t;
}

inline TauDistribution tau_law(int q, int n, int cap = 8192) {
  if (n > cap) throw std::invalid_argument("tau_law: cap exceeded");
  return tau_law_from(dist_law(q, n), log_cyclically_reduced_counts(q, n));
}

// Exact rational tau law (small n; oracle comparisons).
inline std::vector<BigRational> tau_law_rational(int q, int n) {
  auto d = dist_law_rational(q, n);
  auto C = cyclically_reduced_counts(q, n);
  std::vector<BigRational> t(n + 1, 0);
  t[0] = d[0];
  for (int tv = 1; tv <= n; ++tv) {
    for (int m = 0; tv + 2 * m <= n; ++m) {
      int k = tv + 2 * m;
      if (d[k] == 0) continue;
      BigInt U = (m == 0) ? C[tv] : BigInt(C[tv] * (2 * q - 2) * pow(BigInt(2 * q - 1), m - 1));
      t[tv] += d[k] * BigRational(U, sphere_count_big(q, k));
    }
  }
  return t;
}

// Lambda_n(lambda) = (1/n) ln E[e^{lambda d_n}].
inline std::vector<double> log_mgf(const DistanceDistribution& d,
                                   const std::vector<double>& lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    double acc = kNegInf;
    for (int k = 0; k <= d.n; ++k)
      if (d.logp[k] != kNegInf) acc = logaddexp(acc, d.logp[k] + lam * k);
    out.push_back(acc / d.n);
  }
  return out;
}

enum class Side { Above, Below };

// ln P(d_n >= a n) or ln P(d_n <= a n).
inline double deviation_prob(const DistanceDistribution& d, double a, Side side) {
  if (a < 0) throw std::invalid_argument("deviation_prob: a >= 0 required");
  return side == Side::Above ? d.log_tail_upper(a * d.n) : d.log_tail_lower(a * d.n);
}

}  // namespace ldw
