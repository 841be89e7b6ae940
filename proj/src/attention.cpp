#include "attndisco/attention.hpp"

#include <random>
#include <string>

namespace attndisco {

AttentionMatrix average_heads(const std::vector<AttentionMatrix>& heads) {
  if (heads.empty()) throw DataError("cannot average an empty head list");
  const std::size_t n = heads.front().size();
  std::vector<double> sum(n * n, 0.0);
  for (const AttentionMatrix& h : heads) {
    if (h.size() != n) throw DataError("matrix dimension mismatch across heads");
    const auto& v = h.values();
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
  }
  const double count = static_cast<double>(heads.size());
  for (double& x : sum) x /= count;
  return AttentionMatrix(n, std::move(sum));
}

AttentionMatrix select_matrix(const AnnotatedDocument& doc, const HeadSelector& sel) {
  const int layers = static_cast<int>(doc.layers.size());
  if (sel.layer < 0 || sel.layer >= layers) {
    throw SelectorError("layer " + std::to_string(sel.layer) +
                        " out of range 0.." + std::to_string(layers - 1));
  }
  const AttentionLayer& layer = doc.layers[sel.layer];
  if (sel.mode == HeadSelector::Mode::kAverageHeads) {
    return average_heads(layer.heads);
  }
  const int heads = static_cast<int>(layer.heads.size());
  if (sel.head < 0 || sel.head >= heads) {
    throw SelectorError("head " + std::to_string(sel.head) +
                        " out of range 0.." + std::to_string(heads - 1));
  }
  return layer.heads[sel.head];
}

std::vector<double> importance(const AttentionMatrix& a) {
  const std::size_t n = a.size();
  std::vector<double> score(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = a.row(k);
    for (std::size_t i = 0; i < n; ++i) score[i] += row[i];
  }
  return score;
}

std::size_t importance_argmax(const AttentionMatrix& a) {
  const auto score = importance(a);
  std::size_t best = 0;
  for (std::size_t i = 1; i < score.size(); ++i) {
    if (score[i] > score[best]) best = i;
  }
  return best;
}

AttentionMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DataError("random matrix dimension must be at least 1");
  std::mt19937_64 gen(seed);
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      values[i * n + j] = u;
      sum += u;
    }
    for (std::size_t j = 0; j < n; ++j) {
      values[i * n + j] = sum > 0.0 ? values[i * n + j] / sum
                                    : 1.0 / static_cast<double>(n);
    }
  }
  return AttentionMatrix(n, std::move(values));
}

}  // namespace attndisco
