#include "dtsr/tree.hpp"

#include <algorithm>
#include <bit>
#include <optional>

#include "dtsr/errors.hpp"

namespace dtsr {

namespace {

// Per-node bitsets of variables occurring in the sub-DAG, as packed words.
std::vector<std::uint64_t> vars_below(const std::vector<TreeNode>& nodes,
                                      std::size_t num_vars) {
  const std::size_t words = (num_vars + 63) / 64;
  std::vector<std::uint64_t> below(nodes.size() * words, 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& nd = nodes[i];
    if (nd.is_leaf()) continue;
    auto* row = &below[i * words];
    const auto* zc = &below[nd.zero_child * words];
    const auto* oc = &below[nd.one_child * words];
    for (std::size_t w = 0; w < words; ++w) row[w] = zc[w] | oc[w];
    row[static_cast<std::size_t>(nd.var) / 64] |= 1ull << (nd.var % 64);
  }
  return below;
}

struct EnvKey {
  std::vector<std::uint32_t> packed;  // node id, then sorted var*2+bit

  bool operator==(const EnvKey&) const = default;
};

struct EnvKeyHash {
  std::size_t operator()(const EnvKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k.packed) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Shared state for the general (repeated-variable) evaluation walk.
struct EnvEval {
  const std::vector<TreeNode>& nodes;
  const PartialInput& y;
  std::size_t words;
  const std::vector<std::uint64_t>& below;
  std::vector<std::int8_t> env;  // -1 undecided, else branch taken
  std::unordered_map<EnvKey, Dyadic, EnvKeyHash> memo;

  EnvKey key_for(NodeId id) const {
    EnvKey k;
    k.packed.push_back(id);
    const auto* row = &below[static_cast<std::size_t>(id) * words];
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t m = row[w];
      while (m) {
        const unsigned b = static_cast<unsigned>(std::countr_zero(m));
        m &= m - 1;
        const std::size_t var = w * 64 + b;
        if (env[var] >= 0)
          k.packed.push_back(static_cast<std::uint32_t>(var * 2 + env[var]));
      }
    }
    return k;
  }

  Dyadic run(NodeId id) {
    const TreeNode& nd = nodes[id];
    if (nd.is_leaf()) return nd.label ? Dyadic::one() : Dyadic::zero();
    const std::size_t var = static_cast<std::size_t>(nd.var);
    if (y[var] == Trit::Zero) return run(nd.zero_child);
    if (y[var] == Trit::One) return run(nd.one_child);
    if (env[var] >= 0) return run(env[var] ? nd.one_child : nd.zero_child);
    EnvKey k = key_for(id);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    env[var] = 0;
    Dyadic v0 = run(nd.zero_child);
    env[var] = 1;
    Dyadic v1 = run(nd.one_child);
    env[var] = -1;
    Dyadic v = Dyadic::average(v0, v1);
    memo.emplace(std::move(k), v);
    return v;
  }
};

}  // namespace

DecisionTree DecisionTree::assemble(std::size_t num_vars,
                                    const std::vector<TreeNode>& arena, NodeId root) {
  if (num_vars == 0) throw DomainError("tree must have at least one variable");
  if (root >= arena.size()) throw StructureError("root id out of range");
  for (const TreeNode& nd : arena) {
    if (nd.is_leaf()) {
      if (nd.label > 1) throw DomainError("leaf label out of {0,1}");
    } else {
      if (nd.var < 0 || static_cast<std::size_t>(nd.var) >= num_vars)
        throw DomainError("variable index out of range");
      if (nd.zero_child >= arena.size() || nd.one_child >= arena.size())
        throw StructureError("child id out of range");
    }
  }

  // Iterative post-order walk; assigns topological ids and detects cycles.
  enum : std::uint8_t { kWhite, kGray, kBlack };
  std::vector<std::uint8_t> color(arena.size(), kWhite);
  std::vector<NodeId> renumber(arena.size(), 0);
  std::vector<TreeNode> out;
  std::vector<std::pair<NodeId, int>> stack;  // (node, next child to visit)
  stack.emplace_back(root, 0);
  color[root] = kGray;
  while (!stack.empty()) {
    auto& [id, phase] = stack.back();
    const TreeNode& nd = arena[id];
    NodeId child = 0;
    if (nd.is_leaf() || phase == 2) {
      TreeNode copy = nd;
      if (!copy.is_leaf()) {
        copy.zero_child = renumber[nd.zero_child];
        copy.one_child = renumber[nd.one_child];
      }
      renumber[id] = static_cast<NodeId>(out.size());
      out.push_back(copy);
      color[id] = kBlack;
      stack.pop_back();
      continue;
    }
    child = phase == 0 ? nd.zero_child : nd.one_child;
    ++phase;
    if (color[child] == kGray) throw StructureError("cycle in node graph");
    if (color[child] == kWhite) {
      color[child] = kGray;
      stack.emplace_back(child, 0);
    }
  }
  return DecisionTree(num_vars, std::move(out));
}

DecisionTree::DecisionTree(std::size_t num_vars, std::vector<TreeNode> nodes)
    : num_vars_(num_vars), nodes_(std::move(nodes)) {
  std::vector<std::size_t> d(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_leaf())
      d[i] = 1 + std::max(d[nodes_[i].zero_child], d[nodes_[i].one_child]);
  }
  depth_ = d[nodes_.size() - 1];

  const auto below = vars_below(nodes_, num_vars_);
  const std::size_t words = (num_vars_ + 63) / 64;
  read_once_ = true;
  for (const TreeNode& nd : nodes_) {
    if (nd.is_leaf()) continue;
    const std::size_t w = static_cast<std::size_t>(nd.var) / 64;
    const std::uint64_t bit = 1ull << (nd.var % 64);
    if ((below[nd.zero_child * words + w] & bit) ||
        (below[nd.one_child * words + w] & bit)) {
      read_once_ = false;
      break;
    }
  }
}

TreeBuilder::TreeBuilder(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw DomainError("tree must have at least one variable");
}

NodeId TreeBuilder::leaf(bool label) {
  TreeNode nd;
  nd.label = label;
  const std::uint64_t h = 0x9e3779b97f4a7c15ull + label;
  for (NodeId id : buckets_[h])
    if (nodes_[id] == nd) return id;
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(nd);
  buckets_[h].push_back(id);
  return id;
}

NodeId TreeBuilder::node(std::size_t var, NodeId zero_child, NodeId one_child) {
  if (var >= num_vars_) throw DomainError("variable index out of range");
  if (zero_child >= nodes_.size() || one_child >= nodes_.size())
    throw StructureError("child id out of range");
  TreeNode nd;
  nd.var = static_cast<std::int32_t>(var);
  nd.zero_child = zero_child;
  nd.one_child = one_child;
  std::uint64_t h = var;
  h = h * 0x100000001b3ull ^ zero_child;
  h = h * 0x100000001b3ull ^ one_child;
  for (NodeId id : buckets_[h])
    if (nodes_[id] == nd) return id;
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(nd);
  buckets_[h].push_back(id);
  return id;
}

DecisionTree TreeBuilder::take(NodeId root) const {
  return DecisionTree::assemble(num_vars_, nodes_, root);
}

ValidationReport validate(const DecisionTree& t) {
  ValidationReport r;
  r.well_formed = true;  // construction enforces the structural invariants
  r.read_once_per_path = t.read_once_per_path();
  r.depth = t.depth();
  r.node_count = t.node_count();
  std::vector<BigInt> sz(t.node_count());
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    const TreeNode& nd = t.node(static_cast<NodeId>(i));
    sz[i] = nd.is_leaf() ? BigInt(1) : 1 + sz[nd.zero_child] + sz[nd.one_child];
  }
  r.unfolded_size = sz[t.root()];
  return r;
}

std::vector<std::size_t> support(const DecisionTree& t) {
  std::vector<bool> seen(t.num_vars(), false);
  for (const TreeNode& nd : t.nodes())
    if (!nd.is_leaf()) seen[static_cast<std::size_t>(nd.var)] = true;
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (seen[v]) vars.push_back(v);
  return vars;
}

DecisionTree complement_leaves(const DecisionTree& t) {
  std::vector<TreeNode> nodes = t.nodes();
  for (TreeNode& nd : nodes)
    if (nd.is_leaf()) nd.label ^= 1;
  return DecisionTree::assemble(t.num_vars(), nodes, t.root());
}

std::uint8_t eval_complete(const DecisionTree& t, const Bits& x) {
  if (x.size() != t.num_vars())
    throw ShapeError("input length " + std::to_string(x.size()) +
                     " does not match tree over " + std::to_string(t.num_vars()) +
                     " variables");
  NodeId id = t.root();
  while (!t.node(id).is_leaf()) {
    const TreeNode& nd = t.node(id);
    const std::uint8_t b = x[static_cast<std::size_t>(nd.var)];
    if (b > 1) throw DomainError("complete input entry out of {0,1}");
    id = b ? nd.one_child : nd.zero_child;
  }
  return t.node(id).label;
}

Dyadic eval_partial(const DecisionTree& t, const PartialInput& y) {
  if (y.size() != t.num_vars())
    throw ShapeError("input length " + std::to_string(y.size()) +
                     " does not match tree over " + std::to_string(t.num_vars()) +
                     " variables");
  if (t.read_once_per_path()) {
    std::vector<Dyadic> val(t.node_count());
    for (std::size_t i = 0; i < t.node_count(); ++i) {
      const TreeNode& nd = t.node(static_cast<NodeId>(i));
      if (nd.is_leaf()) {
        val[i] = nd.label ? Dyadic::one() : Dyadic::zero();
      } else {
        switch (y[static_cast<std::size_t>(nd.var)]) {
          case Trit::Zero: val[i] = val[nd.zero_child]; break;
          case Trit::One: val[i] = val[nd.one_child]; break;
          case Trit::Undef:
            val[i] = Dyadic::average(val[nd.zero_child], val[nd.one_child]);
            break;
        }
      }
    }
    return val[t.root()];
  }
  const auto below = vars_below(t.nodes(), t.num_vars());
  EnvEval ev{t.nodes(), y, (t.num_vars() + 63) / 64, below,
             std::vector<std::int8_t>(t.num_vars(), -1), {}};
  return ev.run(t.root());
}

Dyadic eval_partial_bruteforce(const DecisionTree& t, const PartialInput& y,
                               std::size_t max_undef) {
  if (y.size() != t.num_vars())
    throw ShapeError("input length does not match tree");
  std::vector<std::size_t> free_pos;
  Bits x(y.size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == Trit::Undef)
      free_pos.push_back(i);
    else
      x[i] = (y[i] == Trit::One);
  }
  if (free_pos.size() > max_undef)
    throw BudgetError("brute-force evaluation over " + std::to_string(free_pos.size()) +
                      " undefined coordinates exceeds the cap of " +
                      std::to_string(max_undef));
  const std::uint64_t total = 1ull << free_pos.size();
  std::uint64_t ones = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t j = 0; j < free_pos.size(); ++j)
      x[free_pos[j]] = (mask >> j) & 1;
    ones += eval_complete(t, x);
  }
  return Dyadic(BigInt(ones), free_pos.size());
}

}  // namespace dtsr
