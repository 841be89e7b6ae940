#ifndef ATTNDISCO_DEP_PARSER_HPP_
#define ATTNDISCO_DEP_PARSER_HPP_

#include <utility>
#include <vector>

#include "attndisco/const_parser.hpp"
#include "attndisco/core.hpp"

namespace attndisco {

// Fully connected EDU graph: weight(i, j) is how much EDU i influences EDU
// j, i.e. the attention EDU j pays to EDU i. 0-based indices.
class InfluenceGraph {
 public:
  explicit InfluenceGraph(AttentionMatrix a) : a_(std::move(a)) {}

  std::size_t size() const { return a_.size(); }
  double weight(std::size_t head, std::size_t dep) const { return a_.at(dep, head); }

 private:
  AttentionMatrix a_;
};

InfluenceGraph build_graph(const AttentionMatrix& a);

// Weight of the virtual-root arc selecting EDU r (0-based) as the root:
// importance(a)[r] / n.
std::vector<double> root_arc_weights(const AttentionMatrix& a);

// Sum of arc weights of a tree plus the virtual-root arc weight.
double eisner_tree_score(const AttentionMatrix& a, const DependencyTree& tree);

// Sum of influence-graph arc weights over the non-root arcs.
double arc_score(const AttentionMatrix& a, const DependencyTree& tree);

// Projective parse with a single virtual-root child. Sentence constraint
// keeps every sentence a connected subtree; kParagraph is rejected.
DependencyTree eisner_parse(const AttentionMatrix& a,
                            const SpanConstraint& constraint = {});

// Maximum spanning arborescence of a dense graph. weights[h * m + d] is the
// score of arc h -> d. Returns parent indices with -1 at the root.
// Recursive cycle contraction; ties go to the smaller index.
std::vector<int> max_arborescence(std::size_t m, const std::vector<double>& weights,
                                  std::size_t root);

// Non-projective parse rooted at the importance argmax.
DependencyTree cle_parse(const AttentionMatrix& a);

// Sentence graph used by the sentence-constrained CLE. Indices are 0-based
// sentence ordinals (order of first appearance), not raw sentence ids.
struct SentenceGraph {
  std::size_t sentences = 0;
  std::vector<std::pair<int, int>> ranges;  // [first, last] EDU per sentence
  std::vector<double> mean;                 // s*m+d, mean EDU weight
  std::vector<std::pair<int, int>> witness; // s*m+d, argmax (head, dep) EDUs
};

SentenceGraph build_sentence_graph(const AttentionMatrix& a,
                                   const std::vector<int>& sent_ids);

DependencyTree cle_parse_sentence_constrained(const AttentionMatrix& a,
                                              const std::vector<int>& sent_ids);
DependencyTree cle_parse_sentence_constrained(const AttentionMatrix& a,
                                              const AnnotatedDocument& doc);

// True when no two arcs cross (root arc excluded): for every arc h -> d all
// EDUs strictly between h and d are descendants of h.
bool is_projective(const DependencyTree& tree);

}  // namespace attndisco

#endif  // ATTNDISCO_DEP_PARSER_HPP_
