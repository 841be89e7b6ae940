#ifndef ATTNDISCO_CORE_HPP_
#define ATTNDISCO_CORE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace attndisco {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (bad files, dimension mismatches,
// out-of-range selectors). The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// A state that should be unreachable for well-formed input.
class InternalError : public Error {
 public:
  using Error::Error;
};

// One EDU of a document. Positions are 1-based; sentence and paragraph ids
// are 0-based and non-decreasing along the document.
struct EduInfo {
  int position = 0;
  int sent_id = 0;
  int para_id = 0;
  std::optional<std::string> text;
};

// Dense n x n attention scores. at(i, j) is the attention EDU i pays to
// EDU j (0-based indices). Entries are always finite and non-negative.
class AttentionMatrix {
 public:
  AttentionMatrix() = default;

  // Throws DataError if values.size() != n*n or any entry is negative or
  // non-finite.
  AttentionMatrix(std::size_t n, std::vector<double> values);

  static AttentionMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static AttentionMatrix identity(std::size_t n);
  static AttentionMatrix uniform(std::size_t n, double value);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_, n_};
  }
  const std::vector<double>& values() const { return values_; }

  // True when some row sum is outside 1 +- tolerance. Not an error: softmax
  // output is typical but not required.
  bool row_sum_warning(double tolerance = 1e-3) const;

  AttentionMatrix scaled(double factor) const;

  friend bool operator==(const AttentionMatrix&, const AttentionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

struct AttentionLayer {
  int layer_index = 0;
  std::vector<AttentionMatrix> heads;
};

// A document: EDU sequence with segmentation plus its attention tensor.
// Attention layers may be empty when the document only supplies
// segmentation (e.g. for random baselines).
struct AnnotatedDocument {
  std::string doc_id;
  std::vector<EduInfo> edus;
  std::vector<AttentionLayer> layers;

  std::size_t size() const { return edus.size(); }
};

// Returns every violated document invariant as a human-readable message;
// an empty result means the document is well formed.
std::vector<std::string> validate_document(const AnnotatedDocument& doc);

// Throws DataError listing all violations, if any.
void require_valid(const AnnotatedDocument& doc);

enum class Nuclearity { kNN, kNS, kSN };

const char* to_string(Nuclearity nuc);
std::optional<Nuclearity> parse_nuclearity(std::string_view label);

// Binary constituency tree over EDUs 1..n stored as a node array. Each node
// covers the closed span [first, last] (1-based).
struct ConstituencyNode {
  int first = 0;
  int last = 0;
  int left = -1;   // child node index, -1 for leaves
  int right = -1;
  std::optional<Nuclearity> nuclearity;

  bool is_leaf() const { return left < 0; }
};

class ConstituencyTree {
 public:
  // Incremental construction, children before parents.
  class Builder {
   public:
    int leaf(int position);
    int join(int left, int right, std::optional<Nuclearity> nuc = std::nullopt);
    // Validates and returns the finished tree rooted at `root`. Throws
    // DataError when the structure is not a binary tree over 1..n.
    ConstituencyTree finish(int root) &&;

   private:
    std::vector<ConstituencyNode> nodes_;
  };

  ConstituencyTree() = default;

  std::size_t size() const { return n_; }  // number of EDUs
  const std::vector<ConstituencyNode>& nodes() const { return nodes_; }
  const ConstituencyNode& node(int index) const { return nodes_[index]; }
  const ConstituencyNode& root() const { return nodes_[root_]; }
  int root_index() const { return root_; }

  // All node spans as (first, last), in pre-order.
  std::vector<std::pair<int, int>> spans() const;

  // True when every internal node carries a nuclearity label.
  bool fully_labeled() const;

  friend bool operator==(const ConstituencyTree& a, const ConstituencyTree& b);

 private:
  std::vector<ConstituencyNode> nodes_;
  int root_ = -1;
  std::size_t n_ = 0;
};

// Rooted dependency tree. head(d) for EDU d (1-based) is the 1-based head
// position, or 0 for the single root.
class DependencyTree {
 public:
  DependencyTree() = default;

  // Throws DataError if heads do not form a single-rooted arborescence.
  explicit DependencyTree(std::vector<int> heads);

  // Lists every invariant violated by a head vector (empty when valid).
  static std::vector<std::string> validate(std::span<const int> heads);

  std::size_t size() const { return heads_.size(); }
  int head(int d) const { return heads_[d - 1]; }
  int root() const { return root_; }
  const std::vector<int>& heads() const { return heads_; }

  friend bool operator==(const DependencyTree&, const DependencyTree&) = default;

 private:
  std::vector<int> heads_;
  int root_ = 0;
};

}  // namespace attndisco

#endif  // ATTNDISCO_CORE_HPP_
