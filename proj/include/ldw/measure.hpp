#pragma once

// Finitely supported driving measures on group elements.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldw/free_group.hpp"
#include "ldw/rng.hpp"
#include "ldw/word.hpp"

namespace ldw {

template <class Elem>
struct FiniteMeasure {
  std::vector<std::pair<Elem, double>> atoms;

  void validate() const {
    if (atoms.empty()) throw std::invalid_argument("FiniteMeasure: empty atom list");
    double s = 0;
    for (auto& [e, p] : atoms) {
      if (!(p > 0)) throw std::invalid_argument("FiniteMeasure: nonpositive probability");
      s += p;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw std::invalid_argument("FiniteMeasure: probabilities must sum to 1");
  }

  // Merges duplicate elements (exact equality) and normalizes tiny drift.
  void canonicalize() {
    std::vector<std::pair<Elem, double>> merged;
    for (auto& [e, p] : atoms) {
      bool found = false;
      for (auto& [me, mp] : merged) {
        if (me == e) {
          mp += p;
          found = true;
          break;
        }
      }
      if (!found) merged.emplace_back(e, p);
    }
    atoms = std::move(merged);
    validate();
  }

  const Elem& sample(Rng& rng) const {
    double u = rng.uniform01();
    double acc = 0;
    for (auto& [e, p] : atoms) {
      acc += p;
      if (u < acc) return e;
    }
    return atoms.back().first;
  }
};

inline FiniteMeasure<Word> uniform_generator_measure(int q) {
  require_rank(q);
  FiniteMeasure<Word> mu;
  for (int i = 0; i < 2 * q; ++i)
    mu.atoms.emplace_back(Word{{static_cast<Letter>(i)}}, 1.0 / (2 * q));
  return mu;
}

inline FiniteMeasure<Word> point_mass(const Word& w) {
  return FiniteMeasure<Word>{{{w, 1.0}}};
}

}  // namespace ldw
