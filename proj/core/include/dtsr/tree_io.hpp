#pragma once

#include <string>

#include "dtsr/tree.hpp"

namespace dtsr {

/// Text format, one entry per line:
///
///   dtree 1
///   vars <n>
///   <id> leaf <0|1>
///   <id> node <var> <zero_child_id> <one_child_id>
///   root <id>
///
/// Variables are 1-based in files (0-based in memory); '#' starts a comment.
/// Node ids are arbitrary and may reference entries defined later; sharing
/// is preserved. serialize() emits ids in topological order, so
/// deserialize(serialize(t)) reproduces t exactly.
std::string serialize(const DecisionTree& t);

DecisionTree deserialize(const std::string& text);

DecisionTree load_tree(const std::string& path);
void save_tree(const DecisionTree& t, const std::string& path);

}  // namespace dtsr
