#ifndef ATTNDISCO_CONST_PARSER_HPP_
#define ATTNDISCO_CONST_PARSER_HPP_

#include <vector>

#include "attndisco/core.hpp"

namespace attndisco {

// Span admissibility derived from document segmentation.
//
// Sentence level: [i, j] is admissible iff i and j lie in the same sentence,
// or i starts a sentence and j ends one. Paragraph level additionally
// requires a multi-sentence span to stay inside one paragraph unless i
// starts a paragraph and j ends one.
class SpanConstraint {
 public:
  enum class Level { kNone, kSentence, kParagraph };

  SpanConstraint() = default;

  static SpanConstraint none() { return {}; }
  static SpanConstraint from_document(const AnnotatedDocument& doc, Level level);
  // sent_ids / para_ids indexed by 0-based EDU; both must be non-decreasing.
  static SpanConstraint from_ids(Level level, std::vector<int> sent_ids,
                                 std::vector<int> para_ids = {});

  Level level() const { return level_; }

  // 0-based closed span [i, j].
  bool admissible(int i, int j) const;

  bool same_sentence(int i, int j) const { return sent_[i] == sent_[j]; }
  bool sentence_start(int i) const { return i == 0 || sent_[i - 1] != sent_[i]; }
  bool sentence_end(int i) const {
    return i + 1 == static_cast<int>(sent_.size()) || sent_[i + 1] != sent_[i];
  }
  const std::vector<int>& sentence_ids() const { return sent_; }

  // Number of EDUs the constraint was built for (0 for kNone).
  std::size_t size() const { return sent_.size(); }

 private:
  Level level_ = Level::kNone;
  std::vector<int> sent_;
  std::vector<int> para_;
};

// How the combination step halves its terms.
enum class CkyScoreVariant {
  // (left + right + avg_lr + avg_rl) / 2
  kHalveAll,
  // left + right + (avg_lr + avg_rl) / 2
  kHalveLinks,
};

struct CkyResult {
  ConstituencyTree tree;  // unlabeled
  double score = 0.0;
};

// Chart of optimal sub-tree scores; exposed for inspection and tests.
struct CkyChart {
  std::size_t n = 0;
  std::vector<double> score;  // n*n, row-major, -inf for inadmissible cells
  std::vector<int> split;     // n*n, last index of the left child, -1 unset

  double at(std::size_t i, std::size_t j) const { return score[i * n + j]; }
  int split_at(std::size_t i, std::size_t j) const { return split[i * n + j]; }
};

CkyChart cky_chart(const AttentionMatrix& a, const SpanConstraint& constraint = {},
                   CkyScoreVariant variant = CkyScoreVariant::kHalveAll);

CkyResult cky_parse(const AttentionMatrix& a, const SpanConstraint& constraint = {},
                    CkyScoreVariant variant = CkyScoreVariant::kHalveAll);

// Mean of a over the block rows [r0, r1] x cols [c0, c1] using a 2-D prefix
// sum table; O(1) per query.
class BlockMean {
 public:
  explicit BlockMean(const AttentionMatrix& a);
  double operator()(std::size_t r0, std::size_t r1, std::size_t c0,
                    std::size_t c1) const;

 private:
  std::size_t stride_;
  std::vector<double> prefix_;  // (n+1)*(n+1)
};

}  // namespace attndisco

#endif  // ATTNDISCO_CONST_PARSER_HPP_
