#include "attndisco/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "attndisco/attention.hpp"
#include "attndisco/dep_parser.hpp"

namespace attndisco::oracle {

namespace {

struct Shape {
  int first, last;
  std::shared_ptr<const Shape> left, right;
};
using ShapePtr = std::shared_ptr<const Shape>;

std::vector<ShapePtr> shapes(int first, int last) {
  if (first == last) return {std::make_shared<const Shape>(Shape{first, last, nullptr, nullptr})};
  std::vector<ShapePtr> out;
  for (int k = first; k < last; ++k) {
    const auto lefts = shapes(first, k);
    const auto rights = shapes(k + 1, last);
    for (const auto& l : lefts) {
      for (const auto& r : rights) {
        out.push_back(std::make_shared<const Shape>(Shape{first, last, l, r}));
      }
    }
  }
  return out;
}

int emit(const Shape& s, ConstituencyTree::Builder& builder) {
  if (!s.left) return builder.leaf(s.first);
  const int l = emit(*s.left, builder);
  const int r = emit(*s.right, builder);
  return builder.join(l, r);
}

void require_range(int n, int max_n, const char* what) {
  if (n < 1 || n > max_n) {
    throw DataError(std::string(what) + ": n=" + std::to_string(n) +
                    " outside 1.." + std::to_string(max_n));
  }
}

double block_mean(const AttentionMatrix& a, int r0, int r1, int c0, int c1) {
  double sum = 0.0;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) sum += a.at(r, c);
  }
  return sum / static_cast<double>((r1 - r0 + 1) * (c1 - c0 + 1));
}

double score_node(const ConstituencyTree& t, int idx, const AttentionMatrix& a,
                  CkyScoreVariant variant) {
  const ConstituencyNode& node = t.node(idx);
  if (node.is_leaf()) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += a.at(k, node.first - 1);
    return sum;
  }
  const ConstituencyNode& l = t.node(node.left);
  const ConstituencyNode& r = t.node(node.right);
  const double left = score_node(t, node.left, a, variant);
  const double right = score_node(t, node.right, a, variant);
  const double links = block_mean(a, l.first - 1, l.last - 1, r.first - 1, r.last - 1) +
                       block_mean(a, r.first - 1, r.last - 1, l.first - 1, l.last - 1);
  if (variant == CkyScoreVariant::kHalveAll) return (left + right + links) / 2.0;
  return left + right + links / 2.0;
}

using Emit = std::function<void()>;

// Tiles EDUs [i, j] with dependent subtrees attached to head h.
void gen_dependents(int i, int j, int h, std::vector<int>& heads, const Emit& done);

void gen_subtree(int a, int b, int g, std::vector<int>& heads, const Emit& done) {
  gen_dependents(a, g - 1, g, heads, [&] { gen_dependents(g + 1, b, g, heads, done); });
}

void gen_dependents(int i, int j, int h, std::vector<int>& heads, const Emit& done) {
  if (i > j) {
    done();
    return;
  }
  for (int b = i; b <= j; ++b) {
    for (int g = i; g <= b; ++g) {
      heads[g - 1] = h;
      gen_subtree(i, b, g, heads, [&] { gen_dependents(b + 1, j, h, heads, done); });
    }
  }
}

double plain_importance(const AttentionMatrix& a, int col) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a.at(k, col);
  return sum;
}

double oracle_arc_sum(const AttentionMatrix& a, const DependencyTree& t) {
  double sum = 0.0;
  for (int d = 1; d <= static_cast<int>(t.size()); ++d) {
    if (t.head(d) != 0) sum += a.at(d - 1, t.head(d) - 1);
  }
  return sum;
}

double oracle_eisner_score(const AttentionMatrix& a, const DependencyTree& t) {
  return oracle_arc_sum(a, t) +
         plain_importance(a, t.root() - 1) / static_cast<double>(a.size());
}

}  // namespace

std::vector<ConstituencyTree> enum_binary_trees(int n) {
  require_range(n, 10, "enum_binary_trees");
  std::vector<ConstituencyTree> out;
  for (const auto& s : shapes(1, n)) {
    ConstituencyTree::Builder builder;
    const int root = emit(*s, builder);
    out.push_back(std::move(builder).finish(root));
  }
  return out;
}

double score_const_tree(const ConstituencyTree& tree, const AttentionMatrix& a,
                        CkyScoreVariant variant) {
  if (tree.size() != a.size()) {
    throw DataError("tree and matrix disagree on the EDU count");
  }
  return score_node(tree, tree.root_index(), a, variant);
}

std::vector<DependencyTree> enum_arborescences(int n, int root) {
  require_range(n, 7, "enum_arborescences");
  if (root < 1 || root > n) throw DataError("enum_arborescences: root out of range");
  std::vector<DependencyTree> out;
  std::vector<int> heads(n, 0);
  // Odometer over head choices for the non-root nodes.
  std::vector<int> nodes;
  for (int d = 1; d <= n; ++d) {
    if (d != root) nodes.push_back(d);
  }
  const auto acyclic = [&] {
    for (int d = 1; d <= n; ++d) {
      int v = d;
      for (int steps = 0; v != 0; ++steps) {
        if (steps > n) return false;
        v = heads[v - 1];
      }
    }
    return true;
  };
  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (k == nodes.size()) {
      if (acyclic()) out.emplace_back(heads);
      return;
    }
    const int d = nodes[k];
    for (int h = 1; h <= n; ++h) {
      if (h == d) continue;
      heads[d - 1] = h;
      assign(k + 1);
    }
  };
  assign(0);
  return out;
}

std::vector<DependencyTree> enum_projective_trees(int n) {
  require_range(n, 7, "enum_projective_trees");
  std::vector<DependencyTree> out;
  std::vector<int> heads(n, 0);
  for (int r = 1; r <= n; ++r) {
    heads[r - 1] = 0;
    gen_subtree(1, n, r, heads, [&] { out.emplace_back(heads); });
  }
  return out;
}

std::vector<CertifyResult> certify(int min_n, int max_n, int trials,
                                   std::uint64_t seed, double tolerance) {
  if (min_n < 1 || max_n > 7 || min_n > max_n || trials < 1) {
    throw DataError("certify: need 1 <= min_n <= max_n <= 7 and trials >= 1");
  }
  CertifyResult cky{"cky", 0, 0, 0.0};
  CertifyResult cky_sent{"cky-sentence", 0, 0, 0.0};
  CertifyResult eis{"eisner", 0, 0, 0.0};
  CertifyResult eis_sent{"eisner-sentence", 0, 0, 0.0};
  CertifyResult cle{"cle", 0, 0, 0.0};
  const auto record = [tolerance](CertifyResult& r, double parsed, double best) {
    const double gap = std::abs(parsed - best);
    ++r.cases;
    r.max_gap = std::max(r.max_gap, gap);
    if (gap > tolerance) ++r.failures;
  };

  std::mt19937_64 seg_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int n = min_n; n <= max_n; ++n) {
    const auto binary = enum_binary_trees(n);
    const auto projective = enum_projective_trees(n);
    std::vector<std::vector<DependencyTree>> arbs(n + 1);
    for (int t = 0; t < trials; ++t) {
      const AttentionMatrix a =
          random_matrix(n, seed + static_cast<std::uint64_t>(n) * 1000003ULL + t);

      double best = -1e300;
      for (const auto& tree : binary) best = std::max(best, score_const_tree(tree, a));
      record(cky, cky_parse(a).score, best);

      std::vector<int> sent(n, 0);
      for (int k = 1; k < n; ++k) sent[k] = sent[k - 1] + static_cast<int>(seg_rng() % 3 == 0);
      const auto constraint =
          SpanConstraint::from_ids(SpanConstraint::Level::kSentence, sent);
      best = -1e300;
      for (const auto& tree : binary) {
        bool ok = true;
        for (const auto& [f, l] : tree.spans()) ok = ok && constraint.admissible(f - 1, l - 1);
        if (ok) best = std::max(best, score_const_tree(tree, a));
      }
      record(cky_sent, cky_parse(a, constraint).score, best);

      best = -1e300;
      double best_sent = -1e300;
      for (const auto& tree : projective) {
        const double s = oracle_eisner_score(a, tree);
        best = std::max(best, s);
        if (sentences_connected(tree, sent)) best_sent = std::max(best_sent, s);
      }
      record(eis, oracle_eisner_score(a, eisner_parse(a)), best);
      record(eis_sent, oracle_eisner_score(a, eisner_parse(a, constraint)), best_sent);

      int root = 0;
      for (int i = 1; i < n; ++i) {
        if (plain_importance(a, i) > plain_importance(a, root)) root = i;
      }
      if (arbs[root + 1].empty()) arbs[root + 1] = enum_arborescences(n, root + 1);
      best = -1e300;
      for (const auto& tree : arbs[root + 1]) best = std::max(best, oracle_arc_sum(a, tree));
      record(cle, oracle_arc_sum(a, cle_parse(a)), best);
    }
  }
  return {cky, cky_sent, eis, eis_sent, cle};
}

bool sentences_connected(const DependencyTree& tree, const std::vector<int>& sent_ids) {
  if (sent_ids.size() != tree.size()) {
    throw DataError("sentence ids do not match the tree size");
  }
  // A vertex subset of a rooted tree is connected iff exactly one member has
  // its parent outside the subset.
  std::vector<int> entries;
  for (int d = 1; d <= static_cast<int>(tree.size()); ++d) {
    const int s = sent_ids[d - 1];
    if (static_cast<std::size_t>(s) >= entries.size()) entries.resize(s + 1, 0);
    const int h = tree.head(d);
    if (h == 0 || sent_ids[h - 1] != s) ++entries[s];
  }
  for (std::size_t d = 0; d < sent_ids.size(); ++d) {
    if (entries[sent_ids[d]] != 1) return false;
  }
  return true;
}

}  // namespace attndisco::oracle
