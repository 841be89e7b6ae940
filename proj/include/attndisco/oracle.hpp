#ifndef ATTNDISCO_ORACLE_HPP_
#define ATTNDISCO_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "attndisco/const_parser.hpp"
#include "attndisco/core.hpp"

// Brute-force reference implementations. They enumerate every candidate
// structure and score it directly, sharing no code with the parsers they
// certify.
namespace attndisco::oracle {

// Every binary bracketing of EDUs 1..n (Catalan(n-1) trees). 1 <= n <= 10.
std::vector<ConstituencyTree> enum_binary_trees(int n);

// Recursive tree score with plain-loop block averages.
double score_const_tree(const ConstituencyTree& tree, const AttentionMatrix& a,
                        CkyScoreVariant variant = CkyScoreVariant::kHalveAll);

// Every spanning arborescence of the complete digraph on n nodes rooted at
// `root` (1-based), as head vectors. 1 <= n <= 7.
std::vector<DependencyTree> enum_arborescences(int n, int root);

// Every single-root projective tree on n nodes. 1 <= n <= 7.
std::vector<DependencyTree> enum_projective_trees(int n);

// True when the EDUs of every sentence form a connected subtree.
// sent_ids holds one non-negative sentence id per EDU (0-based index).
bool sentences_connected(const DependencyTree& tree, const std::vector<int>& sent_ids);

// Result of certifying one parser against its oracle on random matrices.
struct CertifyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double max_gap = 0.0;  // largest |parser - oracle| observed
};

// Runs `trials` seeded random matrices per n in [min_n, max_n] through each
// parser and its oracle. Used by the CLI's --oracle mode.
std::vector<CertifyResult> certify(int min_n, int max_n, int trials,
                                   std::uint64_t seed, double tolerance = 1e-9);

}  // namespace attndisco::oracle

#endif  // ATTNDISCO_ORACLE_HPP_
