#include <catch2/catch_amalgamated.hpp>

#include "ldw/rng.hpp"
#include "ldw/word.hpp"
#include "ldw/free_group.hpp"
#include "oracles.hpp"

using namespace ldw;

TEST_CASE("reduce") {
  CHECK(format_word(parse_word("aAb")) == "b");
  CHECK(format_word(parse_word("")) == "");
  CHECK(format_word(parse_word("abBa")) == "aa");
  // idempotent
  Word w = parse_word("abBa");
  CHECK(reduce(w.ls) == w);
}

TEST_CASE("concat and invert group laws") {
  CHECK(format_word(concat(parse_word("ab"), parse_word("Ba"))) == "aa");
  Word w = parse_word("abAB");
  CHECK(concat(w, invert(w)).empty());
  CHECK(format_word(invert(parse_word("ab"))) == "BA");

  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    Word u = uniform_sphere_sample(2, rng.uniform_below(6), rng);
    Word v = uniform_sphere_sample(2, rng.uniform_below(6), rng);
    Word x = uniform_sphere_sample(2, rng.uniform_below(6), rng);
    CHECK(concat(concat(u, v), x) == concat(u, concat(v, x)));
  }
}

TEST_CASE("cyclic_reduce") {
  CHECK(format_word(cyclic_reduce(parse_word("abA"))) == "b");
  CHECK(format_word(cyclic_reduce(parse_word("ab"))) == "ab");
  // cascading strip: a b a b^-1 a^-1 -> a
  Word w = parse_word("ababA");
  REQUIRE(w.size() == 5);
  CHECK(cyclic_reduce(w) == oracle::strip_cyclic(w));

  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    Word u = uniform_sphere_sample(2, 1 + rng.uniform_below(10), rng);
    CHECK(cyclic_reduce(u) == oracle::strip_cyclic(u));
  }
}

TEST_CASE("word metric is a metric and matches prefix geometry") {
  std::vector<Word> pts;
  Rng rng(3);
  for (int t = 0; t < 30; ++t) pts.push_back(uniform_sphere_sample(2, rng.uniform_below(9), rng));
  for (const auto& u : pts)
    for (const auto& v : pts) {
      CHECK(word_dist(u, v) == word_dist(v, u));
      CHECK(word_dist(u, v) == concat(invert(u), v).size());
      if (u == v) CHECK(word_dist(u, v) == 0);
      for (const auto& x : pts)
        CHECK(word_dist(u, v) <= word_dist(u, x) + word_dist(x, v));
    }
}

TEST_CASE("rotation law: min over rotations equals tau, steps at most 2") {
  Rng rng(23);
  for (int t = 0; t < 300; ++t) {
    int n = 2 + rng.uniform_below(11);  // up to 12
    Word w = uniform_sphere_sample(2, n, rng);
    CHECK(oracle::min_rotation_length(w) == tau_tree(w));
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t a = rotate(w, i).size();
      std::size_t b = rotate(w, (i + 1) % w.size()).size();
      CHECK((a > b ? a - b : b - a) <= 2);
    }
  }
}

TEST_CASE("cylinder_of") {
  CHECK(format_word(cylinder_of(parse_word("abab"), 2)) == "ab");
  CHECK(format_word(cylinder_of(parse_word("a"), 1)) == "a");
  CHECK(format_word(cylinder_of(parse_word("bAb"), 3)) == "bAb");
  CHECK_THROWS(cylinder_of(parse_word("a"), 2));
}

TEST_CASE("tau conjugacy invariance and tau <= displacement") {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    Word w = uniform_sphere_sample(2, rng.uniform_below(10), rng);
    Word g = uniform_sphere_sample(2, rng.uniform_below(8), rng);
    CHECK(tau_tree(concat(concat(g, w), invert(g))) == tau_tree(w));
    CHECK(tau_tree(w) <= w.size());
  }
}
