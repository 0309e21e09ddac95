#pragma once

#include "fid3/tree.hpp"

#include <filesystem>
#include <string>

namespace fid3 {

/// Model files are JSON with a fixed key order:
///
///   format, version, crisp, tnorm, beta, min_node_weight, num_output_classes,
///   attributes, fallback_effort, output_partition, variables, nodes
///
/// Partitions are {variable, domain:[min,max], sets:[{kind, breakpoints}]}.
/// Nodes are listed by id with {id, split, children, gain, representative_effort,
/// retained, total_weight, entropy, empty, proportions}; `split` is null for
/// leaves. Reals are written in shortest round-trip form, so save/load is exact.
std::string serialize_tree(const FuzzyTree &tree);
FuzzyTree deserialize_tree(const std::string &text);

void save_tree(const std::filesystem::path &path, const FuzzyTree &tree);
FuzzyTree load_tree(const std::filesystem::path &path);

} // namespace fid3
