#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtsr/bigint.hpp"
#include "dtsr/dyadic.hpp"
#include "dtsr/partial_input.hpp"

namespace dtsr {

using NodeId = std::uint32_t;

/// One arena slot. Leaves store their label and have var == kLeaf; inner
/// nodes carry a 0-based variable index and two child ids.
struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;

  std::int32_t var = kLeaf;
  NodeId zero_child = 0;
  NodeId one_child = 0;
  std::uint8_t label = 0;

  bool is_leaf() const { return var == kLeaf; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Rooted binary decision tree over num_vars Boolean variables.
///
/// Nodes may be shared (the arena is a DAG), but the semantics are always
/// those of the unfolded tree. The arena is normalized on construction:
/// only nodes reachable from the root are kept, children precede parents,
/// and the root is the last entry. Instances are immutable; evaluation is
/// safe from multiple threads.
class DecisionTree {
 public:
  /// Normalizes and checks an arbitrary arena: unreachable nodes are
  /// dropped, shared duplicates are preserved as given, ids are renumbered
  /// topologically. Throws StructureError on cycles or dangling child ids,
  /// DomainError on variable indices outside [0, num_vars).
  static DecisionTree assemble(std::size_t num_vars, const std::vector<TreeNode>& arena,
                               NodeId root);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t node_count() const { return nodes_.size(); }
  NodeId root() const { return static_cast<NodeId>(nodes_.size() - 1); }
  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  /// Maximum number of queries along any root-to-leaf path.
  std::size_t depth() const { return depth_; }
  /// False iff some variable repeats along some root-to-leaf path. Controls
  /// the memoization strategy in eval_partial.
  bool read_once_per_path() const { return read_once_; }

  bool operator==(const DecisionTree& o) const {
    return num_vars_ == o.num_vars_ && nodes_ == o.nodes_;
  }

 private:
  DecisionTree(std::size_t num_vars, std::vector<TreeNode> nodes);

  std::size_t num_vars_ = 0;
  std::vector<TreeNode> nodes_;
  std::size_t depth_ = 0;
  bool read_once_ = true;
};

/// Bottom-up tree constructor with hash-consing: structurally identical
/// nodes are created once, so gadget builders get shared sub-DAGs for free.
class TreeBuilder {
 public:
  explicit TreeBuilder(std::size_t num_vars);

  NodeId leaf(bool label);
  NodeId node(std::size_t var, NodeId zero_child, NodeId one_child);

  std::size_t num_vars() const { return num_vars_; }
  /// Arena occupancy, for budget checks during large constructions.
  std::size_t size() const { return nodes_.size(); }

  /// Extracts the tree rooted at `root`. The builder stays usable, so one
  /// arena can serve several overlapping constructions.
  DecisionTree take(NodeId root) const;

 private:
  std::size_t num_vars_;
  std::vector<TreeNode> nodes_;
  std::unordered_map<std::uint64_t, std::vector<NodeId>> buckets_;
};

struct ValidationReport {
  bool well_formed = false;
  bool read_once_per_path = false;
  std::size_t depth = 0;
  std::size_t node_count = 0;
  BigInt unfolded_size;  // node count of the fully unfolded tree
};

ValidationReport validate(const DecisionTree& t);

/// Sorted list of variables queried anywhere in the tree.
std::vector<std::size_t> support(const DecisionTree& t);

/// New tree with every leaf label flipped.
DecisionTree complement_leaves(const DecisionTree& t);

/// Leaf label reached by descending on a complete input.
std::uint8_t eval_complete(const DecisionTree& t, const Bits& x);

/// Exact probability that a uniformly random completion of y evaluates
/// to 1. On read-once-per-path trees this is a single pass over the arena
/// with per-node memoization; otherwise the walk carries the partial
/// assignment accumulated along the path and memoizes on (node, assignment
/// restricted to variables occurring below the node), which is what makes
/// repeated variables come out right.
Dyadic eval_partial(const DecisionTree& t, const PartialInput& y);

/// Enumeration oracle: evaluates every completion of y. Refuses with
/// BudgetError when y has more than max_undef undefined coordinates.
Dyadic eval_partial_bruteforce(const DecisionTree& t, const PartialInput& y,
                               std::size_t max_undef = 24);

}  // namespace dtsr
