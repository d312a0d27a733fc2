#pragma once

// Small numeric utilities shared across modules: log-sum-exp, Wilson score
// intervals, least-squares line fits.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ldw {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

inline double logsumexp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

struct WilsonInterval {
  double lo = 0, hi = 1;
};

// 95% Wilson score interval unless another z is given.
inline WilsonInterval wilson(std::uint64_t hits, std::uint64_t samples, double z = 1.959964) {
  if (samples == 0) throw std::invalid_argument("wilson: no samples");
  double n = static_cast<double>(samples);
  double p = static_cast<double>(hits) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
  std::size_t points = 0;
};

inline LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("least_squares: need >= 2 matched points");
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cxy = sxy - sx * sy / n;
  if (vx == 0) throw std::invalid_argument("least_squares: degenerate x values");
  LineFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy == 0 ? 1.0 : (cxy * cxy) / (vx * vy);
  f.points = xs.size();
  return f;
}

}  // namespace ldw
