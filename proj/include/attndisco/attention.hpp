#ifndef ATTNDISCO_ATTENTION_HPP_
#define ATTNDISCO_ATTENTION_HPP_

#include <cstdint>
#include <vector>

#include "attndisco/core.hpp"

namespace attndisco {

// Raised when a layer/head selector is out of the tensor bounds.
class SelectorError : public DataError {
 public:
  using DataError::DataError;
};

// Picks one attention matrix out of a document's tensor: either a single
// head or the element-wise mean over all heads of a layer.
struct HeadSelector {
  enum class Mode { kAverageHeads, kSingleHead };

  int layer = 0;
  Mode mode = Mode::kAverageHeads;
  int head = 0;  // used when mode == kSingleHead

  static HeadSelector average(int layer) { return {layer, Mode::kAverageHeads, 0}; }
  static HeadSelector single(int layer, int head) {
    return {layer, Mode::kSingleHead, head};
  }
};

AttentionMatrix select_matrix(const AnnotatedDocument& doc, const HeadSelector& sel);

// Element-wise mean of equally sized matrices.
AttentionMatrix average_heads(const std::vector<AttentionMatrix>& heads);

// Column sums: the attention every EDU receives, diagonal included.
std::vector<double> importance(const AttentionMatrix& a);

// Index of the largest importance score, smallest index on ties (0-based).
std::size_t importance_argmax(const AttentionMatrix& a);

// Seeded row-normalized uniform matrix. Uses mt19937_64 and a fixed 53-bit
// mantissa mapping so the result is identical across platforms.
AttentionMatrix random_matrix(std::size_t n, std::uint64_t seed);

}  // namespace attndisco

#endif  // ATTNDISCO_ATTENTION_HPP_
