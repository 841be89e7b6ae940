#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "attndisco/attention.hpp"
#include "attndisco/dep_parser.hpp"
#include "attndisco/oracle.hpp"
#include "doctest.h"

using namespace attndisco;

namespace {

const AttentionMatrix kRunning = AttentionMatrix::from_rows({{0.1, 0.9}, {0.8, 0.2}});

// Sentence-constrained CLE recomputed with brute force at every step.
DependencyTree reference_sentence_cle(const AttentionMatrix& a, const std::vector<int>& sent) {
  const int n = static_cast<int>(a.size());
  const int m = sent.back() + 1;
  std::vector<std::vector<int>> members(m);
  for (int i = 0; i < n; ++i) members[sent[i]].push_back(i);
  const auto imp = importance(a);
  const int r = static_cast<int>(std::max_element(imp.begin(), imp.end()) - imp.begin());

  std::vector<double> mean(m * m, 0.0);
  std::vector<std::pair<int, int>> witness(m * m);
  for (int s = 0; s < m; ++s)
    for (int d = 0; d < m; ++d) {
      if (s == d) continue;
      double sum = 0, best = -1;
      for (int h : members[s])
        for (int x : members[d]) {
          const double w = a.at(x, h);
          sum += w;
          if (w > best) {
            best = w;
            witness[s * m + d] = {h, x};
          }
        }
      mean[s * m + d] = sum / (members[s].size() * members[d].size());
    }

  std::vector<int> heads(n, 0);
  std::vector<int> local_root(m, -1);
  local_root[sent[r]] = r;
  if (m > 1) {
    double best = -1;
    DependencyTree best_tree;
    for (const auto& t : oracle::enum_arborescences(m, sent[r] + 1)) {
      double score = 0;
      for (int d = 1; d <= m; ++d)
        if (t.head(d) != 0) score += mean[(t.head(d) - 1) * m + (d - 1)];
      if (score > best) {
        best = score;
        best_tree = t;
      }
    }
    for (int d = 1; d <= m; ++d) {
      if (best_tree.head(d) == 0) continue;
      const auto [h, x] = witness[(best_tree.head(d) - 1) * m + (d - 1)];
      heads[x] = h + 1;
      local_root[d - 1] = x;
    }
  }
  for (int s = 0; s < m; ++s) {
    const auto& mem = members[s];
    const int k = static_cast<int>(mem.size());
    const int lr = local_root[s] - mem.front();
    double best = -1;
    DependencyTree best_tree;
    for (const auto& t : oracle::enum_arborescences(k, lr + 1)) {
      double score = 0;
      for (int d = 1; d <= k; ++d)
        if (t.head(d) != 0) score += a.at(mem[d - 1], mem[t.head(d) - 1]);
      if (score > best) {
        best = score;
        best_tree = t;
      }
    }
    for (int d = 1; d <= k; ++d)
      if (best_tree.head(d) != 0) heads[mem[d - 1]] = mem[best_tree.head(d) - 1] + 1;
  }
  return DependencyTree(heads);
}

}  // namespace

TEST_CASE("influence graph is the transposed matrix") {
  const auto g = build_graph(kRunning);
  CHECK(g.weight(0, 1) == 0.8);
  CHECK(g.weight(1, 0) == 0.9);
  const auto sym = build_graph(AttentionMatrix::from_rows({{0.2, 0.3}, {0.3, 0.4}}));
  CHECK(sym.weight(0, 1) == sym.weight(1, 0));
  const auto id = build_graph(AttentionMatrix::identity(3));
  for (std::size_t h = 0; h < 3; ++h)
    for (std::size_t d = 0; d < 3; ++d)
      if (h != d) CHECK(id.weight(h, d) == 0.0);
}

TEST_CASE("eisner small cases") {
  CHECK(eisner_parse(AttentionMatrix::from_rows({{1.0}})).heads() == std::vector<int>{0});
  const auto t = eisner_parse(kRunning);
  CHECK(t.heads() == std::vector<int>{2, 0});
  CHECK(eisner_tree_score(kRunning, t) == doctest::Approx(1.45));
  CHECK(eisner_tree_score(kRunning, DependencyTree({0, 1})) == doctest::Approx(1.25));

  const auto a = random_matrix(3, 11);
  double best = -1;
  for (const auto& c : oracle::enum_projective_trees(3)) best = std::max(best, eisner_tree_score(a, c));
  CHECK(std::abs(eisner_tree_score(a, eisner_parse(a)) - best) < 1e-12);
}

TEST_CASE("eisner is exact and projective") {
  for (int n = 2; n <= 7; ++n) {
    const auto trees = oracle::enum_projective_trees(n);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto a = random_matrix(n, 500 + seed * 7 + n);
      double best = -1;
      for (const auto& t : trees) best = std::max(best, eisner_tree_score(a, t));
      const auto t = eisner_parse(a);
      CHECK(is_projective(t));
      CHECK(std::abs(eisner_tree_score(a, t) - best) < 1e-9);
    }
  }
}

TEST_CASE("sentence-constrained eisner keeps sentences connected") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 5);
    std::vector<int> sent(n, 0);
    for (int i = 1; i < n; ++i) sent[i] = sent[i - 1] + static_cast<int>(gen() % 3 == 0);
    const auto a = random_matrix(n, 9000 + trial);
    double best = -1;
    for (const auto& t : oracle::enum_projective_trees(n)) {
      if (oracle::sentences_connected(t, sent)) best = std::max(best, eisner_tree_score(a, t));
    }
    const auto t =
        eisner_parse(a, SpanConstraint::from_ids(SpanConstraint::Level::kSentence, sent));
    CHECK(is_projective(t));
    CHECK(oracle::sentences_connected(t, sent));
    CHECK(std::abs(eisner_tree_score(a, t) - best) < 1e-9);
  }
  CHECK_THROWS_AS(eisner_parse(kRunning, SpanConstraint::from_ids(
                                             SpanConstraint::Level::kParagraph, {0, 1}, {0, 1})),
                  DataError);
}

TEST_CASE("cle small cases") {
  CHECK(cle_parse(kRunning).heads() == std::vector<int>{2, 0});
  CHECK(cle_parse(AttentionMatrix::from_rows({{0.3}})).heads() == std::vector<int>{0});

  // Greedy in-arcs form the cycle 2 <-> 3 below the fixed root 1.
  const auto a = AttentionMatrix::from_rows(
      {{0.9, 0.05, 0.05}, {0.3, 0.05, 0.65}, {0.32, 0.63, 0.05}});
  CHECK(importance_argmax(a) == 0);
  const auto t = cle_parse(a);
  CHECK(t.heads() == std::vector<int>{0, 3, 1});
  CHECK(arc_score(a, t) == doctest::Approx(0.97));
  double best = -1;
  for (const auto& c : oracle::enum_arborescences(3, 1)) best = std::max(best, arc_score(a, c));
  CHECK(arc_score(a, t) == doctest::Approx(best));
}

TEST_CASE("cle is exact") {
  for (int n = 2; n <= 7; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto a = random_matrix(n, 70000 + seed * 13 + n);
      const int root = static_cast<int>(importance_argmax(a)) + 1;
      double best = -1;
      for (const auto& t : oracle::enum_arborescences(n, root)) best = std::max(best, arc_score(a, t));
      const auto t = cle_parse(a);
      CHECK(t.root() == root);
      CHECK(std::abs(arc_score(a, t) - best) < 1e-9);
    }
  }
}

TEST_CASE("max_arborescence on a hand graph") {
  // 0 is the root; greedy picks 1 <- 2 and 2 <- 1.
  const std::vector<double> w = {0, 1, 1,
                                 0, 0, 5,
                                 0, 6, 0};
  const auto parent = max_arborescence(3, w, 0);
  CHECK(parent == std::vector<int>{-1, 2, 0});  // 0->2 (1) + 2->1 (6)
}

TEST_CASE("sentence-constrained cle") {
  const auto a = random_matrix(5, 3);
  CHECK(cle_parse_sentence_constrained(a, std::vector<int>(5, 0)) == cle_parse(a));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto b = random_matrix(4, seed);
    const std::vector<int> sent = {0, 0, 1, 1};
    const auto t = cle_parse_sentence_constrained(b, sent);
    int crossing = 0;
    for (int d = 1; d <= 4; ++d)
      if (t.head(d) != 0 && sent[t.head(d) - 1] != sent[d - 1]) ++crossing;
    CHECK(crossing == 1);
    CHECK(oracle::sentences_connected(t, sent));
  }
}

TEST_CASE("three sentences chained root to middle to last") {
  std::vector<std::vector<double>> rows(6, std::vector<double>(6, 0.02));
  rows[0][0] = 0.5;
  rows[1][0] = 0.5;
  rows[2][0] = rows[3][0] = 0.5;
  rows[4][3] = rows[5][3] = 0.5;
  const auto a = AttentionMatrix::from_rows(rows);
  const std::vector<int> sent = {0, 0, 1, 1, 2, 2};
  const auto g = build_sentence_graph(a, sent);
  CHECK(g.sentences == 3);
  CHECK(g.mean[0 * 3 + 1] == doctest::Approx(0.26));
  CHECK(g.mean[1 * 3 + 2] == doctest::Approx(0.26));
  CHECK(g.mean[0 * 3 + 2] == doctest::Approx(0.02));
  CHECK(g.witness[0 * 3 + 1] == std::pair<int, int>{0, 2});
  CHECK(g.witness[1 * 3 + 2] == std::pair<int, int>{3, 4});
  const auto t = cle_parse_sentence_constrained(a, sent);
  CHECK(t.heads() == std::vector<int>{0, 1, 1, 3, 4, 5});
  CHECK(t == reference_sentence_cle(a, sent));
}

TEST_CASE("sentence-constrained cle matches a brute-force replay") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 4);
    std::vector<int> sent;
    for (int s = 0; s < m; ++s) {
      const int len = 1 + static_cast<int>(gen() % 4);
      for (int k = 0; k < len; ++k) sent.push_back(s);
    }
    const auto a = random_matrix(sent.size(), 4242 + trial);
    CHECK(cle_parse_sentence_constrained(a, sent) == reference_sentence_cle(a, sent));
  }
}

TEST_CASE("projectivity check") {
  CHECK(is_projective(DependencyTree({0, 1, 2})));
  CHECK(is_projective(DependencyTree({2, 0, 2})));
  CHECK_FALSE(is_projective(DependencyTree({0, 4, 1, 1})));  // 4->2 crosses 1->3
}
