#include <random>

#include "attndisco/io.hpp"
#include "attndisco/metrics.hpp"
#include "attndisco/oracle.hpp"
#include "doctest.h"

using namespace attndisco;

namespace {

ConstituencyTree tree(const char* text) { return as_binary(io::parse_bracketed(text)); }

}  // namespace

TEST_CASE("parseval") {
  const auto right = tree("(?? (leaf 1) (?? (leaf 2) (leaf 3)))");
  const auto left = tree("(?? (?? (leaf 1) (leaf 2)) (leaf 3))");
  const auto id = rst_parseval(left, left);
  CHECK(id.matched == 5);
  CHECK(id.total == 5);
  const auto pair = rst_parseval(right, left);
  CHECK(pair.matched == 4);
  CHECK(pair.total == 5);
  CHECK(pair.ratio() == doctest::Approx(0.8));
  const auto two = tree("(?? (leaf 1) (leaf 2))");
  CHECK(rst_parseval(two, tree("(NS (leaf 1) (leaf 2))")).ratio() == 1.0);
  CHECK_THROWS_AS(rst_parseval(two, left), DataError);
}

TEST_CASE("uas") {
  const DependencyTree t({0, 1, 1});
  CHECK(uas(t, t).ratio() == 1.0);
  const auto m = uas(DependencyTree({0, 1, 1}), DependencyTree({0, 1, 2}));
  CHECK(m.matched == 2);
  CHECK(m.total == 3);
  CHECK(uas(DependencyTree({0, 1, 2}), DependencyTree({2, 3, 0})).ratio() == 0.0);
  CHECK_THROWS_AS(uas(t, DependencyTree({0, 1})), DataError);
}

TEST_CASE("parseval floor and symmetry") {
  std::mt19937_64 gen(3);
  for (int n = 3; n <= 9; ++n) {
    const auto all = oracle::enum_binary_trees(n);
    const double floor = (n + 1.0) / (2.0 * n - 1.0);
    for (int k = 0; k < 50; ++k) {
      const auto& a = all[gen() % all.size()];
      const auto& b = all[gen() % all.size()];
      CHECK(rst_parseval(a, b).ratio() >= floor - 1e-12);
      CHECK(rst_parseval(a, b).matched == rst_parseval(b, a).matched);
    }
  }
}

TEST_CASE("aggregate") {
  auto ms = aggregate({1, 1, 1});
  CHECK(ms.mean == 1.0);
  CHECK(ms.std == 0.0);
  ms = aggregate({0, 2});
  CHECK(ms.mean == 1.0);
  CHECK(ms.std == 1.0);
  ms = aggregate({58.5, 58.7});
  CHECK(ms.mean == doctest::Approx(58.6));
  CHECK(ms.std == doctest::Approx(0.1));
  CHECK_THROWS_AS(aggregate({}), DataError);
}

TEST_CASE("report micro and macro") {
  const auto r = make_report("uas", {"a", "b"}, {{1, 2}, {3, 3}});
  CHECK(r.micro == doctest::Approx(0.8));
  CHECK(r.macro == doctest::Approx(0.75));
  CHECK(r.std == doctest::Approx(0.25));
  CHECK(r.per_document[0] == 0.5);
}

TEST_CASE("tree statistics") {
  const auto star = tree_stats(DependencyTree({0, 1, 1, 1}));
  CHECK(star.branch_width == 3.0);
  CHECK(star.height == 1.0);
  CHECK(star.leaf_ratio == 0.75);
  CHECK(star.norm_arc_length == doctest::Approx(0.5));
  CHECK(star.vacuous);

  const auto chain = tree_stats(DependencyTree({0, 1, 2}));
  CHECK(chain.branch_width == 1.0);
  CHECK(chain.height == 2.0);
  CHECK(chain.leaf_ratio == doctest::Approx(1.0 / 3));
  CHECK_FALSE(chain.vacuous);

  const auto one = tree_stats(DependencyTree({0}));
  CHECK(one.height == 0.0);
  CHECK(one.leaf_ratio == 1.0);
  CHECK_FALSE(one.vacuous);

  const auto corpus =
      corpus_tree_stats({DependencyTree({0, 1, 2}), DependencyTree({0, 1, 2, 3})});
  CHECK(corpus.height == 2.5);
  CHECK(corpus.leaf_ratio == doctest::Approx(2.0 / 7));
}

TEST_CASE("locality") {
  const DependencyTree chain({0, 1, 2});
  auto r = locality_report({chain}, {chain});
  CHECK(r.local_ratio_correct == 1.0);
  CHECK(r.local_ratio_ours == 1.0);
  CHECK(r.local_ratio_gt == 1.0);

  r = locality_report({DependencyTree({0, 1, 1, 1})}, {DependencyTree({0, 1, 2, 3})});
  CHECK(r.local_ratio_correct == 1.0);
  CHECK(r.local_ratio_ours == doctest::Approx(1.0 / 3));
  CHECK(r.local_ratio_gt == 1.0);

  const DependencyTree fan({0, 1, 1});
  r = locality_report({fan}, {fan});
  CHECK(r.local_ratio_correct == 0.5);
  CHECK(r.local_ratio_ours == 0.5);
  CHECK(r.local_ratio_gt == 0.5);

  CHECK_THROWS_AS(locality_report({}, {}), DataError);
}
