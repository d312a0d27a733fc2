#pragma once

// Hyperbolic-geometry primitives derived from the pointed-action contract:
// any backend exposing compose/inverse/act/dist gets these for free.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ldw {

template <class Space>
double gromov_product(const Space& sp, const typename Space::Point& x,
                      const typename Space::Point& y, const typename Space::Point& base) {
  double v = 0.5 * (sp.dist(x, base) + sp.dist(y, base) - sp.dist(x, y));
  return v < 0 ? 0.0 : v;
}

template <class Space>
double displacement(const Space& sp, const typename Space::Elem& g) {
  return sp.displacement(g);
}

struct StableLengthBracket {
  double fekete_inf = 0;   // inf_{n <= n_max} d(g^n z0, z0)/n, upper bound for l
  double last_term = 0;    // d(g^{n_max} z0, z0)/n_max
  double diff_estimate = 0;  // d(g^{n_max}) - d(g^{n_max - 1}); converges fast
};

// Fekete bracket for the stable length l(g) = lim d(g^n z0, z0)/n.
template <class Space>
StableLengthBracket stable_length(const Space& sp, const typename Space::Elem& g, int n_max) {
  if (n_max < 4) throw std::invalid_argument("stable_length: n_max >= 4 required");
  StableLengthBracket out;
  out.fekete_inf = std::numeric_limits<double>::infinity();
  typename Space::Elem p = g;
  double prev = 0;
  for (int n = 1; n <= n_max; ++n) {
    double d = sp.displacement(p);
    out.fekete_inf = std::min(out.fekete_inf, d / n);
    if (n == n_max) {
      out.last_term = d / n;
      out.diff_estimate = d - prev;
    }
    prev = d;
    if (n < n_max) p = sp.compose(p, g);
  }
  return out;
}

// Empirical lower bound for the hyperbolicity constant: max over sampled
// quadruples of min{(x3,x1)_{x0}, (x3,x2)_{x0}} - (x1,x2)_{x0}, clamped at 0.
template <class Space, class Sampler>
double four_point_delta(const Space& sp, Sampler&& sample_quadruple, int trials) {
  if (trials < 1) throw std::invalid_argument("four_point_delta: trials >= 1 required");
  double best = 0;
  for (int t = 0; t < trials; ++t) {
    auto [x0, x1, x2, x3] = sample_quadruple();
    double p31 = gromov_product(sp, x3, x1, x0);
    double p32 = gromov_product(sp, x3, x2, x0);
    double p12 = gromov_product(sp, x1, x2, x0);
    best = std::max(best, std::min(p31, p32) - p12);
  }
  return best < 0 ? 0.0 : best;
}

// z lies in the C-shadow of `center` seen from `light`.
template <class Space>
bool shadow_contains(const Space& sp, const typename Space::Point& light,
                     const typename Space::Point& center, double C,
                     const typename Space::Point& z) {
  if (C < 0) throw std::invalid_argument("shadow_contains: C >= 0 required");
  return gromov_product(sp, center, z, light) >= sp.dist(light, center) - C;
}

}  // namespace ldw
