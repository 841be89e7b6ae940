#include "attndisco/core.hpp"

#include <cmath>
#include <sstream>

namespace attndisco {

AttentionMatrix::AttentionMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) {
    throw DataError("matrix dimension mismatch: expected " +
                    std::to_string(n_ * n_) + " entries, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "attention entry (" << k / n_ + 1 << "," << k % n_ + 1
          << ") is " << v << "; entries must be finite and non-negative";
      throw DataError(msg.str());
    }
  }
}

AttentionMatrix AttentionMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw DataError("matrix dimension mismatch: row " + std::to_string(i + 1) +
                      " has " + std::to_string(rows[i].size()) +
                      " columns, expected " + std::to_string(n));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return AttentionMatrix(n, std::move(values));
}

AttentionMatrix AttentionMatrix::identity(std::size_t n) {
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;
  return AttentionMatrix(n, std::move(values));
}

AttentionMatrix AttentionMatrix::uniform(std::size_t n, double value) {
  return AttentionMatrix(n, std::vector<double>(n * n, value));
}

bool AttentionMatrix::row_sum_warning(double tolerance) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (double v : row(i)) sum += v;
    if (std::abs(sum - 1.0) > tolerance) return true;
  }
  return false;
}

AttentionMatrix AttentionMatrix::scaled(double factor) const {
  std::vector<double> values = values_;
  for (double& v : values) v *= factor;
  return AttentionMatrix(n_, std::move(values));
}

std::vector<std::string> validate_document(const AnnotatedDocument& doc) {
  std::vector<std::string> violations;
  const std::size_t n = doc.edus.size();
  if (n == 0) {
    violations.push_back("document has no EDUs");
    return violations;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const EduInfo& edu = doc.edus[k];
    const int expected = static_cast<int>(k) + 1;
    if (edu.position != expected) {
      violations.push_back("EDU at index " + std::to_string(expected) +
                           " has position " + std::to_string(edu.position));
    }
    if (edu.sent_id < 0 || edu.para_id < 0) {
      violations.push_back("EDU " + std::to_string(expected) +
                           " has a negative sentence or paragraph id");
    }
  }

  // Contiguity: ids may only repeat in consecutive runs.
  std::vector<bool> sent_seen;
  std::vector<int> para_of_sent;
  for (std::size_t k = 0; k < n; ++k) {
    const int s = doc.edus[k].sent_id;
    const int p = doc.edus[k].para_id;
    if (s < 0 || p < 0) continue;
    const bool continues = k > 0 && doc.edus[k - 1].sent_id == s;
    if (static_cast<std::size_t>(s) >= sent_seen.size()) {
      sent_seen.resize(s + 1, false);
      para_of_sent.resize(s + 1, -1);
    }
    if (!continues) {
      if (sent_seen[s]) {
        violations.push_back("sentence not contiguous: sentence " +
                             std::to_string(s) + " resumes at EDU " +
                             std::to_string(k + 1));
      }
      sent_seen[s] = true;
      para_of_sent[s] = p;
    } else if (para_of_sent[s] != p) {
      violations.push_back("sentence " + std::to_string(s) +
                           " spans more than one paragraph (EDU " +
                           std::to_string(k + 1) + ")");
    }
    if (k > 0) {
      const EduInfo& prev = doc.edus[k - 1];
      if (prev.sent_id >= 0 && s < prev.sent_id) {
        violations.push_back("sentence ids decrease at EDU " +
                             std::to_string(k + 1));
      }
      if (prev.para_id >= 0 && p < prev.para_id) {
        violations.push_back("paragraph ids decrease at EDU " +
                             std::to_string(k + 1));
      }
    }
  }
  std::vector<bool> para_seen;
  for (std::size_t k = 0; k < n; ++k) {
    const int p = doc.edus[k].para_id;
    if (p < 0) continue;
    const bool continues = k > 0 && doc.edus[k - 1].para_id == p;
    if (static_cast<std::size_t>(p) >= para_seen.size()) {
      para_seen.resize(p + 1, false);
    }
    if (!continues) {
      if (para_seen[p]) {
        violations.push_back("paragraph not contiguous: paragraph " +
                             std::to_string(p) + " resumes at EDU " +
                             std::to_string(k + 1));
      }
      para_seen[p] = true;
    }
  }

  for (const AttentionLayer& layer : doc.layers) {
    if (layer.heads.empty()) {
      violations.push_back("layer " + std::to_string(layer.layer_index) +
                           " has no heads");
    }
    for (std::size_t h = 0; h < layer.heads.size(); ++h) {
      if (layer.heads[h].size() != n) {
        violations.push_back(
            "matrix dimension mismatch: layer " +
            std::to_string(layer.layer_index) + " head " + std::to_string(h) +
            " is " + std::to_string(layer.heads[h].size()) + "x" +
            std::to_string(layer.heads[h].size()) + " but the document has " +
            std::to_string(n) + " EDUs");
      }
    }
  }
  return violations;
}

void require_valid(const AnnotatedDocument& doc) {
  const auto violations = validate_document(doc);
  if (violations.empty()) return;
  std::string msg = "invalid document '" + doc.doc_id + "':";
  for (const auto& v : violations) msg += "\n  " + v;
  throw DataError(msg);
}

const char* to_string(Nuclearity nuc) {
  switch (nuc) {
    case Nuclearity::kNN: return "NN";
    case Nuclearity::kNS: return "NS";
    case Nuclearity::kSN: return "SN";
  }
  return "??";
}

std::optional<Nuclearity> parse_nuclearity(std::string_view label) {
  if (label == "NN") return Nuclearity::kNN;
  if (label == "NS") return Nuclearity::kNS;
  if (label == "SN") return Nuclearity::kSN;
  return std::nullopt;
}

int ConstituencyTree::Builder::leaf(int position) {
  ConstituencyNode node;
  node.first = node.last = position;
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

int ConstituencyTree::Builder::join(int left, int right,
                                    std::optional<Nuclearity> nuc) {
  const int size = static_cast<int>(nodes_.size());
  if (left < 0 || right < 0 || left >= size || right >= size) {
    throw DataError("constituency builder: child index out of range");
  }
  ConstituencyNode node;
  node.first = nodes_[left].first;
  node.last = nodes_[right].last;
  node.left = left;
  node.right = right;
  node.nuclearity = nuc;
  nodes_.push_back(node);
  return size;
}

ConstituencyTree ConstituencyTree::Builder::finish(int root) && {
  if (root < 0 || root >= static_cast<int>(nodes_.size())) {
    throw DataError("constituency builder: bad root index");
  }
  ConstituencyTree tree;
  tree.nodes_ = std::move(nodes_);
  tree.root_ = root;
  const ConstituencyNode& top = tree.nodes_[root];
  if (top.first != 1 || top.last < 1) {
    throw DataError("constituency tree must cover EDUs 1..n, got [" +
                    std::to_string(top.first) + "," +
                    std::to_string(top.last) + "]");
  }
  tree.n_ = static_cast<std::size_t>(top.last);

  // Walk from the root; every node must be reached exactly once and the
  // leaves must appear as 1..n in order.
  std::vector<int> visits(tree.nodes_.size(), 0);
  std::vector<int> stack{root};
  int next_leaf = 1;
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    if (++visits[idx] > 1) throw DataError("constituency tree shares a node");
    const ConstituencyNode& node = tree.nodes_[idx];
    if (node.is_leaf()) {
      if (node.first != next_leaf || node.last != next_leaf) {
        throw DataError("constituency leaves out of order at EDU " +
                        std::to_string(next_leaf));
      }
      ++next_leaf;
      continue;
    }
    const ConstituencyNode& l = tree.nodes_[node.left];
    const ConstituencyNode& r = tree.nodes_[node.right];
    if (l.first != node.first || r.last != node.last || l.last + 1 != r.first ||
        node.first >= node.last) {
      throw DataError("constituency node [" + std::to_string(node.first) +
                      "," + std::to_string(node.last) +
                      "] is not the union of its children");
    }
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
  if (next_leaf != static_cast<int>(tree.n_) + 1) {
    throw DataError("constituency tree leaves do not cover 1..n");
  }
  for (int v : visits) {
    if (v == 0) throw DataError("constituency tree has unreachable nodes");
  }
  return tree;
}

std::vector<std::pair<int, int>> ConstituencyTree::spans() const {
  std::vector<std::pair<int, int>> out;
  if (root_ < 0) return out;
  out.reserve(nodes_.size());
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const ConstituencyNode& node = nodes_[stack.back()];
    stack.pop_back();
    out.emplace_back(node.first, node.last);
    if (!node.is_leaf()) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  return out;
}

bool ConstituencyTree::fully_labeled() const {
  for (const auto& node : nodes_) {
    if (!node.is_leaf() && !node.nuclearity) return false;
  }
  return true;
}

bool operator==(const ConstituencyTree& a, const ConstituencyTree& b) {
  if (a.n_ != b.n_) return false;
  if (a.root_ < 0 || b.root_ < 0) return a.root_ == b.root_;
  std::vector<std::pair<int, int>> stack{{a.root_, b.root_}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const ConstituencyNode& x = a.nodes_[ia];
    const ConstituencyNode& y = b.nodes_[ib];
    if (x.first != y.first || x.last != y.last ||
        x.is_leaf() != y.is_leaf() || x.nuclearity != y.nuclearity) {
      return false;
    }
    if (!x.is_leaf()) {
      stack.emplace_back(x.left, y.left);
      stack.emplace_back(x.right, y.right);
    }
  }
  return true;
}

std::vector<std::string> DependencyTree::validate(std::span<const int> heads) {
  std::vector<std::string> violations;
  const int n = static_cast<int>(heads.size());
  if (n == 0) {
    violations.push_back("dependency tree has no EDUs");
    return violations;
  }
  int roots = 0;
  bool ranges_ok = true;
  for (int d = 1; d <= n; ++d) {
    const int h = heads[d - 1];
    if (h == 0) ++roots;
    if (h < 0 || h > n) {
      violations.push_back("EDU " + std::to_string(d) + " has head " +
                           std::to_string(h) + " outside 0.." +
                           std::to_string(n));
      ranges_ok = false;
    } else if (h == d) {
      violations.push_back("EDU " + std::to_string(d) + " is its own head");
      ranges_ok = false;
    }
  }
  if (roots != 1) {
    violations.push_back("expected exactly one root, found " +
                         std::to_string(roots));
  }
  if (!ranges_ok || roots != 1) return violations;

  // Each EDU must reach the root without revisiting a node.
  std::vector<int> state(n + 1, 0);  // 0 unknown, 1 on path, 2 reaches root
  for (int d = 1; d <= n; ++d) {
    std::vector<int> path;
    int v = d;
    while (v != 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = heads[v - 1];
    }
    if (v != 0 && state[v] == 1) {
      violations.push_back("cycle through EDU " + std::to_string(v));
      return violations;
    }
    for (int p : path) state[p] = 2;
  }
  return violations;
}

DependencyTree::DependencyTree(std::vector<int> heads) : heads_(std::move(heads)) {
  const auto violations = validate(heads_);
  if (!violations.empty()) {
    std::string msg = "invalid dependency tree:";
    for (const auto& v : violations) msg += " " + v + ";";
    throw DataError(msg);
  }
  for (std::size_t d = 0; d < heads_.size(); ++d) {
    if (heads_[d] == 0) root_ = static_cast<int>(d) + 1;
  }
}

}  // namespace attndisco
