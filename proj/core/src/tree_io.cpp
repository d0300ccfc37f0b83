#include "dtsr/tree_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "dtsr/errors.hpp"

namespace dtsr {

std::string serialize(const DecisionTree& t) {
  std::ostringstream out;
  out << "dtree 1\n";
  out << "vars " << t.num_vars() << "\n";
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    const TreeNode& nd = t.node(static_cast<NodeId>(i));
    if (nd.is_leaf())
      out << i << " leaf " << static_cast<int>(nd.label) << "\n";
    else
      out << i << " node " << nd.var + 1 << " " << nd.zero_child << " "
          << nd.one_child << "\n";
  }
  out << "root " << t.root() << "\n";
  return out.str();
}

DecisionTree deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, lineno); };

  bool saw_header = false;
  bool saw_vars = false;
  std::size_t num_vars = 0;
  std::unordered_map<std::uint64_t, NodeId> ids;  // file id -> arena slot
  struct RawNode {
    TreeNode node;
    std::uint64_t file_zero = 0, file_one = 0;
    bool is_node = false;
    std::size_t line = 0;
  };
  std::vector<RawNode> raw;
  std::optional<std::uint64_t> root_file_id;

  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;

    if (!saw_header) {
      int version = 0;
      if (first != "dtree" || !(ls >> version)) fail("expected header 'dtree <version>'");
      if (version != 1) fail("unsupported format version");
      saw_header = true;
      continue;
    }
    if (!saw_vars) {
      if (first != "vars" || !(ls >> num_vars)) fail("expected 'vars <n>'");
      if (num_vars == 0) fail("vars must be positive");
      saw_vars = true;
      continue;
    }
    if (first == "root") {
      std::uint64_t id = 0;
      if (!(ls >> id)) fail("expected 'root <id>'");
      if (root_file_id) fail("duplicate root line");
      root_file_id = id;
      continue;
    }

    std::uint64_t file_id = 0;
    try {
      file_id = std::stoull(first);
    } catch (...) {
      fail("expected node id, 'root', or comment");
    }
    if (ids.count(file_id)) fail("duplicate node id " + std::to_string(file_id));

    std::string kind;
    if (!(ls >> kind)) fail("expected 'leaf' or 'node'");
    RawNode rn;
    rn.line = lineno;
    if (kind == "leaf") {
      int label = -1;
      if (!(ls >> label) || (label != 0 && label != 1)) fail("leaf label must be 0 or 1");
      rn.node.label = static_cast<std::uint8_t>(label);
    } else if (kind == "node") {
      std::int64_t var = 0;
      if (!(ls >> var >> rn.file_zero >> rn.file_one))
        fail("expected 'node <var> <zero_id> <one_id>'");
      if (var < 1 || static_cast<std::size_t>(var) > num_vars)
        fail("variable index " + std::to_string(var) + " out of range 1.." +
             std::to_string(num_vars));
      rn.node.var = static_cast<std::int32_t>(var - 1);
      rn.is_node = true;
    } else {
      fail("unknown entry kind '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
    ids.emplace(file_id, static_cast<NodeId>(raw.size()));
    raw.push_back(std::move(rn));
  }

  lineno = 0;
  if (!saw_header) fail("empty document");
  if (!saw_vars) fail("missing 'vars' line");
  if (!root_file_id) fail("missing 'root' line");
  if (raw.empty()) fail("no node entries");

  std::vector<TreeNode> arena;
  arena.reserve(raw.size());
  for (const RawNode& rn : raw) {
    TreeNode nd = rn.node;
    if (rn.is_node) {
      auto z = ids.find(rn.file_zero);
      auto o = ids.find(rn.file_one);
      if (z == ids.end() || o == ids.end())
        throw ParseError("child id not defined anywhere in the document", rn.line);
      nd.zero_child = z->second;
      nd.one_child = o->second;
    }
    arena.push_back(nd);
  }
  auto rt = ids.find(*root_file_id);
  if (rt == ids.end()) throw ParseError("root id not defined");
  return DecisionTree::assemble(num_vars, arena, rt->second);
}

DecisionTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tree file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

void save_tree(const DecisionTree& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write tree file '" + path + "'");
  out << serialize(t);
}

}  // namespace dtsr
