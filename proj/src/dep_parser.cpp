#include "attndisco/dep_parser.hpp"

#include <limits>
#include <string>

#include "attndisco/attention.hpp"

namespace attndisco {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> to_heads(const std::vector<int>& parent) {
  std::vector<int> heads(parent.size());
  for (std::size_t v = 0; v < parent.size(); ++v) heads[v] = parent[v] + 1;
  return heads;
}

}  // namespace

InfluenceGraph build_graph(const AttentionMatrix& a) { return InfluenceGraph(a); }

std::vector<double> root_arc_weights(const AttentionMatrix& a) {
  auto w = importance(a);
  const double n = static_cast<double>(a.size());
  for (double& x : w) x /= n;
  return w;
}

double arc_score(const AttentionMatrix& a, const DependencyTree& tree) {
  double total = 0.0;
  for (int d = 1; d <= static_cast<int>(tree.size()); ++d) {
    const int h = tree.head(d);
    if (h != 0) total += a.at(d - 1, h - 1);
  }
  return total;
}

double eisner_tree_score(const AttentionMatrix& a, const DependencyTree& tree) {
  return arc_score(a, tree) + root_arc_weights(a)[tree.root() - 1];
}

// Eisner chart over 0-based positions. Complete items C (head at one end,
// no pending dependents) and incomplete items I (an arc between the ends).
// R = head at the left end, L = head at the right end.
//
// Under the sentence constraint a complete item crossing a sentence boundary
// must end on a sentence boundary at its non-head side. This forces every
// sentence to be a connected subtree while leaving the head free to sit
// anywhere inside its sentence.
DependencyTree eisner_parse(const AttentionMatrix& a, const SpanConstraint& constraint) {
  const std::size_t n = a.size();
  if (n == 0) throw DataError("cannot parse an empty matrix");
  if (constraint.level() == SpanConstraint::Level::kParagraph) {
    throw DataError("paragraph constraint is only supported for CKY");
  }
  const bool constrained = constraint.level() == SpanConstraint::Level::kSentence;
  if (constrained && constraint.size() != n) {
    throw DataError("constraint covers " + std::to_string(constraint.size()) +
                    " EDUs but the matrix has " + std::to_string(n));
  }

  const auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };
  std::vector<double> c_r(n * n, kNegInf), c_l(n * n, kNegInf);
  std::vector<double> i_r(n * n, kNegInf), i_l(n * n, kNegInf);
  std::vector<int> bc_r(n * n, -1), bc_l(n * n, -1), bi_r(n * n, -1), bi_l(n * n, -1);
  for (std::size_t i = 0; i < n; ++i) c_r[idx(i, i)] = c_l[idx(i, i)] = 0.0;

  const auto crossing = [&](std::size_t i, std::size_t j) {
    return constrained && !constraint.same_sentence(static_cast<int>(i), static_cast<int>(j));
  };

  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t i = 0; i + len < n; ++i) {
      const std::size_t j = i + len;

      double best = kNegInf;
      int best_k = -1;
      for (std::size_t k = i; k < j; ++k) {
        const double v = c_r[idx(i, k)] + c_l[idx(k + 1, j)];
        if (v > best) {
          best = v;
          best_k = static_cast<int>(k);
        }
      }
      if (best_k >= 0) {
        i_l[idx(i, j)] = best + a.at(i, j);  // arc j -> i
        i_r[idx(i, j)] = best + a.at(j, i);  // arc i -> j
        bi_l[idx(i, j)] = bi_r[idx(i, j)] = best_k;
      }

      if (!crossing(i, j) || constraint.sentence_start(static_cast<int>(i))) {
        best = kNegInf;
        best_k = -1;
        for (std::size_t k = i; k < j; ++k) {
          const double v = c_l[idx(i, k)] + i_l[idx(k, j)];
          if (v > best) {
            best = v;
            best_k = static_cast<int>(k);
          }
        }
        c_l[idx(i, j)] = best;
        bc_l[idx(i, j)] = best_k;
      }

      if (!crossing(i, j) || constraint.sentence_end(static_cast<int>(j))) {
        best = kNegInf;
        best_k = -1;
        for (std::size_t k = i + 1; k <= j; ++k) {
          const double v = i_r[idx(i, k)] + c_r[idx(k, j)];
          if (v > best) {
            best = v;
            best_k = static_cast<int>(k);
          }
        }
        c_r[idx(i, j)] = best;
        bc_r[idx(i, j)] = best_k;
      }
    }
  }

  const auto root_w = root_arc_weights(a);
  double best = kNegInf;
  int root = -1;
  for (std::size_t r = 0; r < n; ++r) {
    const double v = c_l[idx(0, r)] + c_r[idx(r, n - 1)] + root_w[r];
    if (v > best) {
      best = v;
      root = static_cast<int>(r);
    }
  }
  if (root < 0) throw InternalError("Eisner found no spanning tree");

  std::vector<int> parent(n, -1);
  enum Kind { kCR, kCL, kIR, kIL };
  struct Item {
    Kind kind;
    std::size_t i, j;
  };
  std::vector<Item> stack{{kCL, 0, static_cast<std::size_t>(root)},
                          {kCR, static_cast<std::size_t>(root), n - 1}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    if (it.i == it.j) continue;
    const std::size_t cell = idx(it.i, it.j);
    switch (it.kind) {
      case kCR: {
        const std::size_t k = static_cast<std::size_t>(bc_r[cell]);
        stack.push_back({kIR, it.i, k});
        stack.push_back({kCR, k, it.j});
        break;
      }
      case kCL: {
        const std::size_t k = static_cast<std::size_t>(bc_l[cell]);
        stack.push_back({kCL, it.i, k});
        stack.push_back({kIL, k, it.j});
        break;
      }
      case kIR:
      case kIL: {
        const std::size_t k = static_cast<std::size_t>(bi_r[cell]);
        if (it.kind == kIR) {
          parent[it.j] = static_cast<int>(it.i);
        } else {
          parent[it.i] = static_cast<int>(it.j);
        }
        stack.push_back({kCR, it.i, k});
        stack.push_back({kCL, k + 1, it.j});
        break;
      }
    }
  }
  return DependencyTree(to_heads(parent));
}

std::vector<int> max_arborescence(std::size_t m, const std::vector<double>& weights,
                                  std::size_t root) {
  if (root >= m) throw DataError("arborescence root out of range");
  std::vector<int> parent(m, -1);
  for (std::size_t v = 0; v < m; ++v) {
    if (v == root) continue;
    double best = kNegInf;
    int best_u = -1;
    for (std::size_t u = 0; u < m; ++u) {
      if (u == v) continue;
      const double w = weights[u * m + v];
      if (best_u < 0 || w > best) {
        best = w;
        best_u = static_cast<int>(u);
      }
    }
    parent[v] = best_u;
  }

  // Find one cycle among the greedy in-edges.
  std::vector<int> color(m, 0);  // 0 new, 1 on current walk, 2 done
  std::vector<int> cycle;
  for (std::size_t s = 0; s < m && cycle.empty(); ++s) {
    int v = static_cast<int>(s);
    std::vector<int> walk;
    while (v >= 0 && color[v] == 0) {
      color[v] = 1;
      walk.push_back(v);
      v = parent[v];
    }
    if (v >= 0 && color[v] == 1) {
      int u = v;
      do {
        cycle.push_back(u);
        u = parent[u];
      } while (u != v);
    }
    for (int w : walk) color[w] = 2;
  }
  if (cycle.empty()) return parent;

  std::vector<bool> in_cycle(m, false);
  int anchor = static_cast<int>(m);
  for (int v : cycle) {
    in_cycle[v] = true;
    anchor = std::min(anchor, v);
  }

  // Contracted graph: the supernode takes the slot of the smallest cycle
  // node so relative index order is preserved for tie-breaking.
  std::vector<int> to_new(m, -1);
  std::vector<int> to_old;
  for (std::size_t v = 0; v < m; ++v) {
    if (!in_cycle[v] || static_cast<int>(v) == anchor) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(static_cast<int>(v));
    }
  }
  const int super = to_new[anchor];
  for (int v : cycle) to_new[v] = super;
  const std::size_t mm = to_old.size();

  std::vector<double> w2(mm * mm, kNegInf);
  std::vector<int> enter_via(m, -1);  // outside u -> cycle node entered
  std::vector<int> exit_from(m, -1);  // outside v <- cycle node leaving
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (u == v) continue;
      const double w = weights[u * m + v];
      if (!in_cycle[u] && !in_cycle[v]) {
        w2[to_new[u] * mm + to_new[v]] = w;
      } else if (!in_cycle[u] && in_cycle[v]) {
        const double adj = w - weights[parent[v] * m + v];
        double& cell = w2[to_new[u] * mm + super];
        if (enter_via[u] < 0 || adj > cell) {
          cell = adj;
          enter_via[u] = static_cast<int>(v);
        }
      } else if (in_cycle[u] && !in_cycle[v]) {
        double& cell = w2[super * mm + to_new[v]];
        if (exit_from[v] < 0 || w > cell) {
          cell = w;
          exit_from[v] = static_cast<int>(u);
        }
      }
    }
  }

  const std::vector<int> sub = max_arborescence(mm, w2, to_new[root]);

  std::vector<int> result(m, -1);
  for (std::size_t v = 0; v < m; ++v) {
    if (in_cycle[v]) {
      result[v] = parent[v];
      continue;
    }
    const int p = sub[to_new[v]];
    if (p < 0) continue;
    result[v] = p == super ? exit_from[v] : to_old[p];
  }
  const int outside = to_old[sub[super]];
  result[enter_via[outside]] = outside;
  return result;
}

DependencyTree cle_parse(const AttentionMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) throw DataError("cannot parse an empty matrix");
  std::vector<double> w(n * n, kNegInf);
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t d = 0; d < n; ++d) {
      if (h != d) w[h * n + d] = a.at(d, h);
    }
  }
  return DependencyTree(to_heads(max_arborescence(n, w, importance_argmax(a))));
}

SentenceGraph build_sentence_graph(const AttentionMatrix& a,
                                   const std::vector<int>& sent_ids) {
  const std::size_t n = a.size();
  if (sent_ids.size() != n) {
    throw DataError("sentence ids cover " + std::to_string(sent_ids.size()) +
                    " EDUs but the matrix has " + std::to_string(n));
  }
  SentenceGraph g;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && sent_ids[k] < sent_ids[k - 1]) {
      throw DataError("sentence ids must be non-decreasing");
    }
    if (k == 0 || sent_ids[k] != sent_ids[k - 1]) {
      g.ranges.emplace_back(static_cast<int>(k), static_cast<int>(k));
    } else {
      g.ranges.back().second = static_cast<int>(k);
    }
  }
  const std::size_t m = g.ranges.size();
  g.sentences = m;
  g.mean.assign(m * m, kNegInf);
  g.witness.assign(m * m, {-1, -1});
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t d = 0; d < m; ++d) {
      if (s == d) continue;
      const auto [s0, s1] = g.ranges[s];
      const auto [d0, d1] = g.ranges[d];
      double sum = 0.0;
      double best = kNegInf;
      std::pair<int, int> arg{-1, -1};
      for (int h = s0; h <= s1; ++h) {
        for (int x = d0; x <= d1; ++x) {
          const double e = a.at(x, h);
          sum += e;
          if (e > best) {
            best = e;
            arg = {h, x};
          }
        }
      }
      g.mean[s * m + d] = sum / static_cast<double>((s1 - s0 + 1) * (d1 - d0 + 1));
      g.witness[s * m + d] = arg;
    }
  }
  return g;
}

DependencyTree cle_parse_sentence_constrained(const AttentionMatrix& a,
                                              const std::vector<int>& sent_ids) {
  const std::size_t n = a.size();
  if (n == 0) throw DataError("cannot parse an empty matrix");
  const SentenceGraph g = build_sentence_graph(a, sent_ids);
  if (g.sentences == 1) return cle_parse(a);

  const int root = static_cast<int>(importance_argmax(a));
  std::size_t root_sentence = 0;
  while (g.ranges[root_sentence].second < root) ++root_sentence;

  const std::size_t m = g.sentences;
  const std::vector<int> sentence_parent = max_arborescence(m, g.mean, root_sentence);

  std::vector<int> parent(n, -1);
  std::vector<int> local_root(m, -1);
  local_root[root_sentence] = root;
  for (std::size_t d = 0; d < m; ++d) {
    if (d == root_sentence) continue;
    const auto [h, x] = g.witness[sentence_parent[d] * m + d];
    parent[x] = h;
    local_root[d] = x;
  }

  for (std::size_t s = 0; s < m; ++s) {
    const auto [first, last] = g.ranges[s];
    const std::size_t size = static_cast<std::size_t>(last - first + 1);
    if (size == 1) continue;
    std::vector<double> w(size * size, kNegInf);
    for (std::size_t h = 0; h < size; ++h) {
      for (std::size_t d = 0; d < size; ++d) {
        if (h != d) w[h * size + d] = a.at(first + d, first + h);
      }
    }
    const auto local = max_arborescence(
        size, w, static_cast<std::size_t>(local_root[s] - first));
    for (std::size_t v = 0; v < size; ++v) {
      if (local[v] >= 0) parent[first + v] = first + local[v];
    }
  }
  return DependencyTree(to_heads(parent));
}

DependencyTree cle_parse_sentence_constrained(const AttentionMatrix& a,
                                              const AnnotatedDocument& doc) {
  std::vector<int> sent;
  sent.reserve(doc.size());
  for (const EduInfo& edu : doc.edus) sent.push_back(edu.sent_id);
  return cle_parse_sentence_constrained(a, sent);
}

bool is_projective(const DependencyTree& tree) {
  const int n = static_cast<int>(tree.size());
  for (int d = 1; d <= n; ++d) {
    const int h = tree.head(d);
    if (h == 0) continue;
    const int lo = std::min(h, d), hi = std::max(h, d);
    for (int x = lo + 1; x < hi; ++x) {
      int v = x;
      while (v != 0 && v != h) v = tree.head(v);
      if (v != h) return false;
    }
  }
  return true;
}

}  // namespace attndisco
