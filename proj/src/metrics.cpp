#include "attndisco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "attndisco/treeops.hpp"

namespace attndisco {

namespace {

void require_same_size(std::size_t pred, std::size_t gold) {
  if (pred != gold) {
    throw DataError("EDU count mismatch: prediction has " + std::to_string(pred) +
                    ", gold has " + std::to_string(gold));
  }
}

}  // namespace

MatchCount rst_parseval(const ConstituencyTree& pred, const ConstituencyTree& gold) {
  require_same_size(pred.size(), gold.size());
  auto p = pred.spans();
  auto g = gold.spans();
  std::sort(p.begin(), p.end());
  std::sort(g.begin(), g.end());
  std::vector<std::pair<int, int>> common;
  std::set_intersection(p.begin(), p.end(), g.begin(), g.end(),
                        std::back_inserter(common));
  return {static_cast<long>(common.size()), static_cast<long>(g.size())};
}

MatchCount uas(const DependencyTree& pred, const DependencyTree& gold) {
  require_same_size(pred.size(), gold.size());
  MatchCount count{0, static_cast<long>(gold.size())};
  for (int d = 1; d <= static_cast<int>(gold.size()); ++d) {
    if (pred.head(d) == gold.head(d)) ++count.matched;
  }
  return count;
}

MeanStd aggregate(const std::vector<double>& values) {
  if (values.empty()) throw DataError("cannot aggregate an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

ScoreReport make_report(std::string metric, std::vector<std::string> doc_ids,
                        const std::vector<MatchCount>& counts) {
  if (counts.empty()) throw DataError("cannot report on an empty corpus");
  ScoreReport report;
  report.metric = std::move(metric);
  report.doc_ids = std::move(doc_ids);
  MatchCount total;
  for (const MatchCount& c : counts) {
    total += c;
    report.per_document.push_back(c.ratio());
  }
  report.micro = total.ratio();
  const MeanStd ms = aggregate(report.per_document);
  report.macro = report.mean = ms.mean;
  report.std = ms.std;
  return report;
}

TreeStats tree_stats(const DependencyTree& tree) {
  const int n = static_cast<int>(tree.size());
  std::vector<int> children(n + 1, 0);
  double arc_length = 0.0;
  for (int d = 1; d <= n; ++d) {
    const int h = tree.head(d);
    if (h == 0) continue;
    ++children[h];
    arc_length += std::abs(h - d);
  }

  TreeStats stats;
  long parents = 0, child_total = 0;
  for (int v = 1; v <= n; ++v) {
    if (children[v] > 0) {
      ++parents;
      child_total += children[v];
    } else {
      ++stats.leaves;
    }
  }
  stats.nodes = n;
  stats.branch_width = parents == 0 ? 0.0 : static_cast<double>(child_total) / parents;
  stats.leaf_ratio = static_cast<double>(stats.leaves) / n;
  stats.norm_arc_length = n < 2 ? 0.0 : arc_length / (static_cast<double>(n - 1) * n);

  // Depth of every node; heads are resolved lazily with memoization.
  std::vector<int> depth(n + 1, -1);
  int height = 0;
  for (int d = 1; d <= n; ++d) {
    std::vector<int> path;
    int v = d;
    while (v != 0 && depth[v] < 0) {
      path.push_back(v);
      v = tree.head(v);
    }
    int base = v == 0 ? -1 : depth[v];
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth[*it] = ++base;
    height = std::max(height, depth[d]);
  }
  stats.height = height;
  stats.vacuous = is_vacuous(tree);
  return stats;
}

CorpusTreeStats corpus_tree_stats(const std::vector<DependencyTree>& trees) {
  if (trees.empty()) throw DataError("cannot summarize an empty corpus");
  CorpusTreeStats out;
  out.documents = trees.size();
  long leaves = 0, nodes = 0, vacuous = 0;
  for (const DependencyTree& t : trees) {
    const TreeStats s = tree_stats(t);
    out.branch_width += s.branch_width;
    out.height += s.height;
    out.norm_arc_length += s.norm_arc_length;
    leaves += s.leaves;
    nodes += s.nodes;
    vacuous += s.vacuous ? 1 : 0;
  }
  const double count = static_cast<double>(trees.size());
  out.branch_width /= count;
  out.height /= count;
  out.norm_arc_length /= count;
  out.leaf_ratio = static_cast<double>(leaves) / static_cast<double>(nodes);
  out.vacuous_ratio = static_cast<double>(vacuous) / count;
  return out;
}

LocalityReport locality_report(const std::vector<DependencyTree>& preds,
                               const std::vector<DependencyTree>& golds) {
  if (preds.empty()) throw DataError("locality report needs at least one document");
  if (preds.size() != golds.size()) {
    throw DataError("locality report: " + std::to_string(preds.size()) +
                    " predictions for " + std::to_string(golds.size()) + " gold trees");
  }
  long correct = 0, correct_local = 0;
  long ours = 0, ours_local = 0;
  long gt = 0, gt_local = 0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const DependencyTree& p = preds[k];
    const DependencyTree& g = golds[k];
    require_same_size(p.size(), g.size());
    for (int d = 1; d <= static_cast<int>(p.size()); ++d) {
      const int ph = p.head(d);
      const int gh = g.head(d);
      if (ph != 0) {
        ++ours;
        if (std::abs(ph - d) == 1) ++ours_local;
      }
      if (gh != 0) {
        ++gt;
        if (std::abs(gh - d) == 1) ++gt_local;
      }
      if (ph != 0 && ph == gh) {
        ++correct;
        if (std::abs(ph - d) == 1) ++correct_local;
      }
    }
  }
  const auto ratio = [](long num, long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  return {ratio(correct_local, correct), ratio(ours_local, ours), ratio(gt_local, gt)};
}

}  // namespace attndisco
