#pragma once

// 2x2 real unimodular matrices acting on the Poincare disc. The true matrix is
// e^{logScale} * (a, b; c, d); the stored entries are kept with max-abs in
// [0.5, 2] so million-step products never overflow.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>

namespace ldw {

struct MobiusElement {
  double a = 1, b = 0, c = 0, d = 1;
  double logScale = 0;

  static MobiusElement from_entries(double a, double b, double c, double d) {
    double det = a * d - b * c;
    if (det <= 0) throw std::invalid_argument("MobiusElement: determinant must be positive");
    double s = std::sqrt(det);
    MobiusElement m{a / s, b / s, c / s, d / s, 0.0};
    m.renormalize();
    return m;
  }

  void renormalize() {
    double mx = std::max(std::max(std::fabs(a), std::fabs(b)),
                         std::max(std::fabs(c), std::fabs(d)));
    if (mx >= 0.5 && mx <= 2.0) return;
    a /= mx;
    b /= mx;
    c /= mx;
    d /= mx;
    logScale += std::log(mx);
  }

  // Determinant of the true matrix; 1 up to rounding.
  double true_det() const { return (a * d - b * c) * std::exp(2 * logScale); }

  bool operator==(const MobiusElement& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d && logScale == o.logScale;
  }
};

inline MobiusElement mobius_identity() { return MobiusElement{}; }

inline MobiusElement mobius_compose(const MobiusElement& g, const MobiusElement& h) {
  MobiusElement r;
  r.a = g.a * h.a + g.b * h.c;
  r.b = g.a * h.b + g.b * h.d;
  r.c = g.c * h.a + g.d * h.c;
  r.d = g.c * h.b + g.d * h.d;
  r.logScale = g.logScale + h.logScale;
  r.renormalize();
  return r;
}

inline MobiusElement mobius_inverse(const MobiusElement& g) {
  // The true matrix has det 1, so its inverse is its adjugate; at the same
  // logScale the stored adjugate is exactly that.
  MobiusElement r{g.d, -g.b, -g.c, g.a, g.logScale};
  r.renormalize();
  return r;
}

using DiscPoint = std::complex<double>;

// Disc action via the SU(1,1) form: alpha = (a+d)/2 + i(b-c)/2,
// beta = (a-d)/2 - i(b+c)/2, w -> (alpha w + beta) / (conj(beta) w + conj(alpha)).
inline DiscPoint mobius_act(const MobiusElement& g, DiscPoint p) {
  if (std::abs(p) >= 1.0) throw std::invalid_argument("mobius_act: point outside disc");
  std::complex<double> alpha((g.a + g.d) / 2.0, (g.b - g.c) / 2.0);
  std::complex<double> beta((g.a - g.d) / 2.0, -(g.b + g.c) / 2.0);
  DiscPoint r = (alpha * p + beta) / (std::conj(beta) * p + std::conj(alpha));
  if (std::abs(r) >= 1.0 - 1e-13)
    throw std::overflow_error("mobius_act: numeric blow-up near the boundary");
  return r;
}

inline double dist_disc(DiscPoint p, DiscPoint q) {
  double num = 2.0 * std::norm(p - q);
  double den = (1.0 - std::norm(p)) * (1.0 - std::norm(q));
  return std::acosh(1.0 + num / den);
}

// log of the operator norm (largest singular value) of the stored entries.
inline double log_opnorm_entries(const MobiusElement& g) {
  // For a 2x2 block E: sigma_max^2 = (f + sqrt(f^2 - 4 det^2)) / 2, f = ||E||_F^2.
  double f = g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d;
  double det = g.a * g.d - g.b * g.c;
  double disc = f * f - 4.0 * det * det;
  if (disc < 0) disc = 0;
  return 0.5 * std::log((f + std::sqrt(disc)) / 2.0);
}

// d(z0, g z0) = 2 ln sigma_max(true matrix); exact for the disc basepoint 0.
inline double norm_displacement(const MobiusElement& g) {
  double v = 2.0 * (g.logScale + log_opnorm_entries(g));
  return v < 0 ? 0.0 : v;
}

// ln |trace| of the true matrix, in log domain; -inf for zero trace.
inline double log_abs_trace(const MobiusElement& g) {
  double t = g.a + g.d;
  if (t == 0) return -std::numeric_limits<double>::infinity();
  return g.logScale + std::log(std::fabs(t));
}

// Translation length 2 arccosh(|tr|/2) when |tr| > 2, else nullopt.
inline std::optional<double> tau_trace(const MobiusElement& g) {
  double L = log_abs_trace(g) - std::log(2.0);  // ln(|tr|/2)
  if (!(L > 0)) return std::nullopt;
  // 2 ln(x + sqrt(x^2 - 1)) with x = e^L, stable for large L.
  return 2.0 * (L + std::log1p(std::sqrt(1.0 - std::exp(-2.0 * L))));
}

// ln of the largest eigenvalue modulus of the true matrix (0 when |tr| <= 2).
inline double spectral_log(const MobiusElement& g) {
  auto t = tau_trace(g);
  return t ? *t / 2.0 : 0.0;
}

struct DiscSpace {
  using Elem = MobiusElement;
  using Point = DiscPoint;

  Elem identity() const { return mobius_identity(); }
  Point basepoint() const { return DiscPoint(0.0, 0.0); }
  Elem compose(const Elem& g, const Elem& h) const { return mobius_compose(g, h); }
  Elem inverse(const Elem& g) const { return mobius_inverse(g); }
  Point act(const Elem& g, const Point& p) const { return mobius_act(g, p); }
  double dist(const Point& x, const Point& y) const { return dist_disc(x, y); }
  // Log-domain displacement: accurate even when g z0 would saturate disc
  // coordinates.
  double displacement(const Elem& g) const { return norm_displacement(g); }
  std::optional<double> translation_length(const Elem& g) const { return tau_trace(g); }
  double tolerance() const { return 1e-9; }
};

// Rotation by angle theta about the basepoint (elliptic).
inline MobiusElement mobius_rotation(double theta) {
  double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return MobiusElement{c, s, -s, c, 0.0};
}

inline MobiusElement mobius_diag(double t) {
  // diag(e^{t/2}, e^{-t/2}): axis through the basepoint, translation length t.
  return MobiusElement{std::exp(t / 2.0), 0, 0, std::exp(-t / 2.0), 0.0};
}

}  // namespace ldw
