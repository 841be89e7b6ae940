#include "attndisco/treeops.hpp"

#include <string>

namespace attndisco {

NaryNode NaryNode::leaf(int position, std::optional<Role> role) {
  NaryNode node;
  node.position = position;
  node.role = role;
  return node;
}

NaryNode NaryNode::internal(std::vector<NaryNode> children, std::optional<Role> role) {
  NaryNode node;
  node.children = std::move(children);
  node.role = role;
  return node;
}

namespace {

// Returns the span covered by `node`, checking leaf order along the way.
std::pair<int, int> check_node(const NaryNode& node, int& next_leaf) {
  if (node.is_leaf()) {
    if (node.position != next_leaf) {
      throw DataError("tree leaves out of order: expected EDU " +
                      std::to_string(next_leaf) + ", found " +
                      std::to_string(node.position));
    }
    ++next_leaf;
    return {node.position, node.position};
  }
  if (node.children.size() < 2) {
    throw DataError("internal node with a single child at EDU " +
                    std::to_string(next_leaf));
  }
  const int first = next_leaf;
  std::size_t labeled = 0;
  bool nucleus = false;
  for (const NaryNode& child : node.children) {
    check_node(child, next_leaf);
    if (child.role) {
      ++labeled;
      nucleus = nucleus || *child.role == Role::kNucleus;
    }
  }
  const int last = next_leaf - 1;
  if (labeled != 0 && labeled != node.children.size()) {
    throw DataError("node [" + std::to_string(first) + "," + std::to_string(last) +
                    "] mixes labeled and unlabeled children");
  }
  if (labeled != 0 && !nucleus) {
    throw DataError("node [" + std::to_string(first) + "," + std::to_string(last) +
                    "] has no Nucleus child");
  }
  return {first, last};
}

std::optional<Nuclearity> label_for(std::optional<Role> left, std::optional<Role> right) {
  if (!left || !right) return std::nullopt;
  const bool ln = *left == Role::kNucleus;
  const bool rn = *right == Role::kNucleus;
  if (ln && !rn) return Nuclearity::kNS;
  if (!ln && rn) return Nuclearity::kSN;
  return Nuclearity::kNN;
}

struct Built {
  int index;
  std::optional<Role> role;
};

Built build(const NaryNode& node, ConstituencyTree::Builder& builder);

std::optional<Role> spine_role(const std::vector<std::optional<Role>>& roles,
                               std::size_t from) {
  if (!roles[from]) return std::nullopt;
  for (std::size_t k = from; k < roles.size(); ++k) {
    if (roles[k] == Role::kNucleus) return Role::kNucleus;
  }
  return Role::kSatellite;
}

Built build_children(const std::vector<const NaryNode*>& items,
                     const std::vector<std::optional<Role>>& roles,
                     ConstituencyTree::Builder& builder) {
  // Build right-to-left so each spine node knows its own role.
  std::vector<Built> parts;
  parts.reserve(items.size());
  for (const NaryNode* item : items) parts.push_back(build(*item, builder));
  Built acc{parts.back().index, roles.back()};
  for (std::size_t k = items.size() - 1; k-- > 0;) {
    const int joined = builder.join(parts[k].index, acc.index, label_for(roles[k], acc.role));
    acc = {joined, k == 0 ? std::nullopt : spine_role(roles, k)};
  }
  return acc;
}

Built build(const NaryNode& node, ConstituencyTree::Builder& builder) {
  if (node.is_leaf()) return {builder.leaf(node.position), node.role};
  std::vector<const NaryNode*> items;
  std::vector<std::optional<Role>> roles;
  for (const NaryNode& child : node.children) {
    items.push_back(&child);
    roles.push_back(child.role);
  }
  return {build_children(items, roles, builder).index, node.role};
}

bool has_roles(const NaryNode& node) {
  if (node.role) return true;
  for (const NaryNode& child : node.children) {
    if (has_roles(child)) return true;
  }
  return false;
}

}  // namespace

std::size_t check_forest(const NaryForest& forest) {
  if (forest.empty()) throw DataError("empty forest");
  int next_leaf = 1;
  for (const NaryNode& root : forest) check_node(root, next_leaf);
  return static_cast<std::size_t>(next_leaf - 1);
}

ConstituencyTree binarize_right(const NaryForest& forest) {
  check_forest(forest);
  ConstituencyTree::Builder builder;
  if (forest.size() == 1) {
    return std::move(builder).finish(build(forest.front(), builder).index);
  }
  // Forest roots behave as Nucleus children of a synthetic root, unless the
  // forest carries no nuclearity at all.
  bool labeled = false;
  for (const NaryNode& root : forest) labeled = labeled || has_roles(root);
  std::vector<const NaryNode*> items;
  std::vector<std::optional<Role>> roles;
  for (const NaryNode& root : forest) {
    items.push_back(&root);
    roles.push_back(labeled ? std::optional<Role>(root.role.value_or(Role::kNucleus))
                            : std::nullopt);
  }
  return std::move(builder).finish(build_children(items, roles, builder).index);
}

ConstituencyTree binarize_right(const NaryNode& tree) {
  return binarize_right(NaryForest{tree});
}

ConstituencyTree as_binary(const NaryForest& forest) {
  check_forest(forest);
  if (forest.size() != 1) {
    throw ConversionError("document has " + std::to_string(forest.size()) +
                          " top-level trees; binarize it first");
  }
  std::vector<const NaryNode*> pending{&forest.front()};
  while (!pending.empty()) {
    const NaryNode* node = pending.back();
    pending.pop_back();
    if (node->children.size() > 2) {
      throw ConversionError("node with " + std::to_string(node->children.size()) +
                            " children; binarize it first");
    }
    for (const NaryNode& child : node->children) pending.push_back(&child);
  }
  return binarize_right(forest);
}

DependencyTree const_to_dep(const ConstituencyTree& tree) {
  const std::size_t n = tree.size();
  if (n == 0) throw ConversionError("empty constituency tree");
  std::vector<int> heads(n, 0);
  std::vector<int> head_of(tree.nodes().size(), 0);

  // Post-order over the node array.
  std::vector<std::pair<int, bool>> stack{{tree.root_index(), false}};
  while (!stack.empty()) {
    auto [idx, done] = stack.back();
    stack.pop_back();
    const ConstituencyNode& node = tree.node(idx);
    if (node.is_leaf()) {
      head_of[idx] = node.first;
      continue;
    }
    if (!done) {
      stack.emplace_back(idx, true);
      stack.emplace_back(node.right, false);
      stack.emplace_back(node.left, false);
      continue;
    }
    if (!node.nuclearity) {
      throw ConversionError("internal node [" + std::to_string(node.first) + "," +
                            std::to_string(node.last) + "] has no nuclearity");
    }
    const int lh = head_of[node.left];
    const int rh = head_of[node.right];
    if (*node.nuclearity == Nuclearity::kSN) {
      head_of[idx] = rh;
      heads[lh - 1] = rh;
    } else {
      head_of[idx] = lh;
      heads[rh - 1] = lh;
    }
  }
  return DependencyTree(std::move(heads));
}

bool is_vacuous(const DependencyTree& tree) {
  const int n = static_cast<int>(tree.size());
  if (n < 2) return false;
  const int root = tree.root();
  if (root > 2) return false;
  for (int d = 1; d <= n; ++d) {
    if (d != root && tree.head(d) != root) return false;
  }
  return true;
}

}  // namespace attndisco
