#ifndef ATTNDISCO_METRICS_HPP_
#define ATTNDISCO_METRICS_HPP_

#include <string>
#include <vector>

#include "attndisco/core.hpp"

namespace attndisco {

// Matched / total counts for one document or a whole corpus.
struct MatchCount {
  long matched = 0;
  long total = 0;

  double ratio() const {
    return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
  }
  MatchCount& operator+=(const MatchCount& other) {
    matched += other.matched;
    total += other.total;
    return *this;
  }
};

// RST-Parseval over all 2n-1 node spans, leaves and the full span included.
MatchCount rst_parseval(const ConstituencyTree& pred, const ConstituencyTree& gold);

// Unlabeled attachment over all n EDUs, the root's sentinel head included.
MatchCount uas(const DependencyTree& pred, const DependencyTree& gold);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

MeanStd aggregate(const std::vector<double>& values);

struct ScoreReport {
  std::string metric;
  std::vector<std::string> doc_ids;
  std::vector<double> per_document;
  double micro = 0.0;
  double macro = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

// Builds a report from per-document counts: micro sums the counts, macro
// (= mean) averages the per-document ratios.
ScoreReport make_report(std::string metric, std::vector<std::string> doc_ids,
                        const std::vector<MatchCount>& counts);

struct TreeStats {
  double branch_width = 0.0;
  double height = 0.0;
  double leaf_ratio = 0.0;
  double norm_arc_length = 0.0;
  bool vacuous = false;
  // Raw counts behind leaf_ratio, kept for micro corpus averaging.
  long leaves = 0;
  long nodes = 0;
};

TreeStats tree_stats(const DependencyTree& tree);

struct CorpusTreeStats {
  std::size_t documents = 0;
  double branch_width = 0.0;     // mean of per-document values
  double height = 0.0;           // mean of per-document values
  double leaf_ratio = 0.0;       // micro: total leaves / total nodes
  double norm_arc_length = 0.0;  // mean of per-document values
  double vacuous_ratio = 0.0;    // fraction of vacuous trees
};

CorpusTreeStats corpus_tree_stats(const std::vector<DependencyTree>& trees);

struct LocalityReport {
  double local_ratio_correct = 0.0;
  double local_ratio_ours = 0.0;
  double local_ratio_gt = 0.0;
};

// An arc is local when it joins adjacent EDUs. Root arcs are ignored and all
// counts are summed over the corpus. A ratio with an empty denominator is 0.
LocalityReport locality_report(const std::vector<DependencyTree>& preds,
                               const std::vector<DependencyTree>& golds);

}  // namespace attndisco

#endif  // ATTNDISCO_METRICS_HPP_
