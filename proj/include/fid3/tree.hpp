#pragma once

#include "fid3/dataset.hpp"
#include "fid3/fuzzy.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fid3 {

/// An example as seen by one node.
struct WeightedExample {
  std::size_t record_index = 0;
  /// Degree of membership of the example in the node.
  double node_membership = 1.0;
  /// Degree of membership of the example's effort in each output class.
  std::vector<double> class_memberships;
};

struct NodeStatistics {
  std::vector<double> proportions;
  double entropy = 0.0;
  /// Sum of node memberships over retained examples.
  double total_weight = 0.0;
  std::size_t retained = 0;
  /// No class mass at the node; proportions are uniform.
  bool empty = true;

  bool operator==(const NodeStatistics &) const = default;
};

/// Input variable of a tree: which attribute column it reads and how it is partitioned.
struct InputVariable {
  std::size_t attribute_index = 0;
  FuzzyPartition partition;

  const std::string &name() const noexcept { return partition.variable(); }
  bool operator==(const InputVariable &) const = default;
};

struct PathStep {
  std::size_t variable = 0;
  std::size_t set = 0;
  bool operator==(const PathStep &) const = default;
};

struct TreeNode {
  /// Index into FuzzyTree::variables; empty for leaves.
  std::optional<std::size_t> split_variable;
  /// Node ids, one per fuzzy set of the split variable.
  std::vector<std::size_t> children;
  NodeStatistics stats;
  double representative_effort = 0.0;
  /// Gain of the chosen split (internal nodes only).
  double gain = 0.0;
  std::vector<PathStep> path;

  bool is_leaf() const noexcept { return !split_variable.has_value(); }
  bool operator==(const TreeNode &) const = default;
};

struct InductionConfig {
  TNorm tnorm = TNorm::Product;
  /// Significance level: minimum node membership for an example to stay in a node.
  double beta = 0.0;
  double min_node_weight = 1e-6;
  int num_output_classes = 5;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  bool operator==(const InductionConfig &) const = default;
};

/// Learned tree. Node 0 is the root; children always have larger ids than
/// their parent.
struct FuzzyTree {
  std::vector<std::string> attribute_names;
  std::vector<InputVariable> variables;
  FuzzyPartition output_partition;
  InductionConfig config;
  /// Grown from crisp indicator memberships (ID3 baseline).
  bool crisp = false;
  /// Membership-weighted mean training effort; used when no leaf fires.
  double fallback_effort = 0.0;
  std::vector<TreeNode> nodes;

  const TreeNode &root() const { return nodes.front(); }
  std::size_t leaf_count() const;
  /// Number of edges on the longest root-to-leaf path.
  std::size_t depth() const;
  /// How many internal nodes split on each variable.
  std::vector<std::size_t> variable_usage() const;
  std::size_t negative_gain_splits() const;
  std::size_t empty_leaf_count() const;

  /// Memberships of a value of variable v, crisp indicators for crisp trees.
  std::vector<double> input_memberships(std::size_t v, double x) const;

  bool operator==(const FuzzyTree &) const = default;
};

/// Membership-weighted class proportions at a node. Falls back to the uniform
/// vector when the class mass is zero.
std::vector<double> class_proportions(std::span<const WeightedExample> examples, TNorm t,
                                      std::size_t num_classes);

/// Base-2 entropy with 0 log 0 = 0.
double fuzzy_entropy(std::span<const double> proportions);

NodeStatistics node_statistics(std::span<const WeightedExample> examples, TNorm t,
                               std::size_t num_classes);

/// Parent entropy minus the weight-averaged child entropies, child weights
/// being the normalised total_weight. Zero-weight children contribute nothing.
double information_gain(const NodeStatistics &node, std::span<const NodeStatistics> children);

/// Gains closer than this are ties, resolved by lower variable index.
inline constexpr double kGainTieTolerance = 1e-12;
inline constexpr double kPureEntropy = 1e-12;

/// Fuzzy ID3. `inputs` lists candidate variables in tie-break order.
FuzzyTree grow_fuzzy_tree(const Dataset &data, std::span<const InputVariable> inputs,
                          const FuzzyPartition &output_partition, const InductionConfig &cfg);

/// Classical ID3 on maximum-membership set indices and classes.
FuzzyTree grow_crisp_tree(const Dataset &data, std::span<const InputVariable> inputs,
                          const FuzzyPartition &output_partition, const InductionConfig &cfg);

/// Partitioning options used to derive InputVariables from a training set.
struct PartitionOptions {
  int default_sets = kMaxFuzzySets;
  /// Per-variable overrides by attribute name; take precedence over the schema.
  std::vector<std::pair<std::string, int>> overrides;

  int sets_for(const AttributeSpec &attr) const;
};

/// Uniform partitions over each attribute's observed range. Constant
/// attributes are dropped. Throws DataError(ConstantVariable) if none remain.
std::vector<InputVariable> make_input_variables(const Dataset &data,
                                                const PartitionOptions &opts);

struct TrainOptions {
  InductionConfig induction;
  PartitionOptions partitions;
  bool crisp = false;
};

/// Derives input and output partitions from `data` and grows a tree.
FuzzyTree train(const Dataset &data, const TrainOptions &opts);

} // namespace fid3
