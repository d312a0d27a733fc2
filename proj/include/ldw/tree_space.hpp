#pragma once

// The Cayley tree of F_q as a pointed metric space with the left action.

#include <optional>

#include "ldw/word.hpp"

namespace ldw {

struct TreeSpace {
  using Elem = Word;
  using Point = Word;

  int q = 2;

  Elem identity() const { return Word{}; }
  Point basepoint() const { return Word{}; }
  Elem compose(const Elem& g, const Elem& h) const { return concat(g, h); }
  Elem inverse(const Elem& g) const { return invert(g); }
  Point act(const Elem& g, const Point& p) const { return concat(g, p); }
  double dist(const Point& x, const Point& y) const {
    return static_cast<double>(word_dist(x, y));
  }
  double displacement(const Elem& g) const { return static_cast<double>(g.size()); }
  std::optional<double> translation_length(const Elem& g) const {
    return static_cast<double>(tau_tree(g));
  }
  double tolerance() const { return 0.0; }
};

}  // namespace ldw
