#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "attndisco/attention.hpp"
#include "attndisco/const_parser.hpp"
#include "attndisco/io.hpp"
#include "attndisco/oracle.hpp"
#include "doctest.h"

using namespace attndisco;

namespace {

const AttentionMatrix kRunning = AttentionMatrix::from_rows({{0.1, 0.9}, {0.8, 0.2}});
const AttentionMatrix kThree =
    AttentionMatrix::from_rows({{0, 0.1, 0.1}, {0.1, 0, 0.9}, {0.1, 0.9, 0}});

std::string shape(const ConstituencyTree& t) { return io::format_const_tree(t); }

bool admissible_tree(const ConstituencyTree& t, const SpanConstraint& c) {
  for (const auto& [i, j] : t.spans()) {
    if (!c.admissible(i - 1, j - 1)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("single EDU") {
  const auto r = cky_parse(AttentionMatrix::from_rows({{0.7}}));
  CHECK(r.tree.size() == 1);
  CHECK(r.score == doctest::Approx(0.7));
}

TEST_CASE("two EDUs") {
  const auto r = cky_parse(kRunning);
  CHECK(shape(r.tree) == "(?? (leaf 1) (leaf 2))");
  CHECK(r.score == doctest::Approx(1.85));
}

TEST_CASE("three EDUs, both score variants") {
  // Oracle scores: halve-all gives 1.15 for (1 (2 3)) and 1.35 for ((1 2) 3);
  // halve-links gives 3.2 and 2.8.
  const auto trees = oracle::enum_binary_trees(3);
  REQUIRE(trees.size() == 2);
  for (const auto& t : trees) {
    const double all = oracle::score_const_tree(t, kThree, CkyScoreVariant::kHalveAll);
    const double links = oracle::score_const_tree(t, kThree, CkyScoreVariant::kHalveLinks);
    if (shape(t) == "(?? (leaf 1) (?? (leaf 2) (leaf 3)))") {
      CHECK(all == doctest::Approx(1.15));
      CHECK(links == doctest::Approx(3.2));
    } else {
      CHECK(all == doctest::Approx(1.35));
      CHECK(links == doctest::Approx(2.8));
    }
  }
  const auto halve_all = cky_parse(kThree);
  CHECK(shape(halve_all.tree) == "(?? (?? (leaf 1) (leaf 2)) (leaf 3))");
  CHECK(halve_all.score == doctest::Approx(1.35));
  const auto halve_links = cky_parse(kThree, {}, CkyScoreVariant::kHalveLinks);
  CHECK(shape(halve_links.tree) == "(?? (leaf 1) (?? (leaf 2) (leaf 3)))");
  CHECK(halve_links.score == doctest::Approx(3.2));
}

TEST_CASE("sentence constraint forces the only admissible structure") {
  const auto c = SpanConstraint::from_ids(SpanConstraint::Level::kSentence, {0, 0, 1});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(shape(cky_parse(random_matrix(3, seed), c).tree) ==
          "(?? (?? (leaf 1) (leaf 2)) (leaf 3))");
  }
  // Even when the unconstrained parse prefers the other split.
  CHECK(shape(cky_parse(kThree, SpanConstraint::from_ids(SpanConstraint::Level::kSentence,
                                                          {0, 1, 1}), CkyScoreVariant::kHalveAll)
                  .tree) == "(?? (leaf 1) (?? (leaf 2) (leaf 3)))");
}

TEST_CASE("admissibility predicate") {
  using L = SpanConstraint::Level;
  const auto s = SpanConstraint::from_ids(L::kSentence, {0, 0, 1, 1, 2});
  CHECK(s.admissible(0, 1));
  CHECK(s.admissible(0, 3));
  CHECK(s.admissible(2, 4));
  CHECK_FALSE(s.admissible(1, 2));
  CHECK_FALSE(s.admissible(0, 2));
  const auto p = SpanConstraint::from_ids(L::kParagraph, {0, 1, 2, 3}, {0, 0, 1, 1});
  CHECK(p.admissible(0, 1));
  CHECK(p.admissible(0, 3));
  CHECK_FALSE(p.admissible(1, 2));
  CHECK_FALSE(p.admissible(1, 3));
  CHECK(SpanConstraint::none().admissible(1, 2));
}

TEST_CASE("block mean matches a plain loop") {
  const auto a = random_matrix(7, 3);
  const BlockMean mean(a);
  for (std::size_t r0 = 0; r0 < 7; ++r0)
    for (std::size_t r1 = r0; r1 < 7; ++r1)
      for (std::size_t c0 = 0; c0 < 7; ++c0)
        for (std::size_t c1 = c0; c1 < 7; ++c1) {
          double sum = 0;
          for (std::size_t i = r0; i <= r1; ++i)
            for (std::size_t j = c0; j <= c1; ++j) sum += a.at(i, j);
          CHECK(std::abs(mean(r0, r1, c0, c1) - sum / ((r1 - r0 + 1) * (c1 - c0 + 1))) < 1e-12);
        }
}

TEST_CASE("exact against enumeration") {
  for (auto variant : {CkyScoreVariant::kHalveAll, CkyScoreVariant::kHalveLinks}) {
    for (int n = 1; n <= 7; ++n) {
      const auto trees = oracle::enum_binary_trees(n);
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto a = random_matrix(n, seed * 31 + n);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& t : trees) best = std::max(best, oracle::score_const_tree(t, a, variant));
        const auto r = cky_parse(a, {}, variant);
        CHECK(std::abs(r.score - best) < 1e-9);
        CHECK(std::abs(oracle::score_const_tree(r.tree, a, variant) - best) < 1e-9);
      }
    }
  }
}

TEST_CASE("paragraph constraint is exact against filtered enumeration") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 5);
    std::vector<int> sent(n), para(n);
    int s = 0, p = 0;
    for (int i = 1; i < n; ++i) {
      if (gen() % 2) {
        ++s;
        if (gen() % 2) ++p;
      }
      sent[i] = s;
      para[i] = p;
    }
    const auto c = SpanConstraint::from_ids(SpanConstraint::Level::kParagraph, sent, para);
    const auto a = random_matrix(n, 1000 + trial);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : oracle::enum_binary_trees(n)) {
      if (admissible_tree(t, c)) best = std::max(best, oracle::score_const_tree(t, a));
    }
    const auto r = cky_parse(a, c);
    CHECK(admissible_tree(r.tree, c));
    CHECK(std::abs(r.score - best) < 1e-9);
  }
}

TEST_CASE("scaling the matrix scales the chart") {
  const auto a = random_matrix(12, 9);
  const auto base = cky_chart(a);
  const auto scaled = cky_chart(a.scaled(3.7));
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i; j < 12; ++j) {
      CHECK(std::abs(scaled.at(i, j) - 3.7 * base.at(i, j)) < 1e-9);
      if (i < j) CHECK(scaled.split_at(i, j) == base.split_at(i, j));
    }
}

TEST_CASE("ties take the smallest split") {
  // Under uniform attention both splits of three EDUs score the same.
  const auto r = cky_parse(AttentionMatrix::uniform(3, 0.5));
  CHECK(shape(r.tree) == "(?? (leaf 1) (?? (leaf 2) (leaf 3)))");
}
