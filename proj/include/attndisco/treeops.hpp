#ifndef ATTNDISCO_TREEOPS_HPP_
#define ATTNDISCO_TREEOPS_HPP_

#include <optional>
#include <vector>

#include "attndisco/core.hpp"

namespace attndisco {

enum class Role { kNucleus, kSatellite };

// Gold discourse tree as annotated: arbitrary arity, each child marked
// Nucleus or Satellite relative to its parent. `role` is unset for
// unlabeled trees and for forest roots.
struct NaryNode {
  int position = 0;  // leaf EDU (1-based); 0 for internal nodes
  std::vector<NaryNode> children;
  std::optional<Role> role;

  bool is_leaf() const { return children.empty(); }

  static NaryNode leaf(int position, std::optional<Role> role = std::nullopt);
  static NaryNode internal(std::vector<NaryNode> children,
                           std::optional<Role> role = std::nullopt);
};

// A document may arrive as several top-level trees.
using NaryForest = std::vector<NaryNode>;

class ConversionError : public DataError {
 public:
  using DataError::DataError;
};

// Checks leaf order 1..n and, for labeled internal nodes, that every child is
// marked with at least one Nucleus. Returns the EDU count.
std::size_t check_forest(const NaryForest& forest);

// Right-branching binarization: (c1, c2, ..., ck) becomes
// (c1, (c2, (... ck))). Forest roots are joined the same way, with roots
// counted as Nucleus. A synthetic spine node is a Nucleus when any child it
// covers is; a spine node over two Satellites is labeled NN.
ConstituencyTree binarize_right(const NaryForest& forest);
ConstituencyTree binarize_right(const NaryNode& tree);

// Reads an already-binary single tree without restructuring. Throws
// ConversionError on a forest or a node with more than two children.
ConstituencyTree as_binary(const NaryForest& forest);

// Nucleus-head conversion: every internal node is headed by the head of its
// leftmost Nucleus child and the other child's head attaches to it.
DependencyTree const_to_dep(const ConstituencyTree& tree);

// Root among the first two EDUs and every other EDU attached to it.
bool is_vacuous(const DependencyTree& tree);

}  // namespace attndisco

#endif  // ATTNDISCO_TREEOPS_HPP_
