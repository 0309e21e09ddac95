#include "fid3/tree.hpp"

#include "fid3/error.hpp"

#include <algorithm>
#include <cmath>

namespace fid3 {

void InductionConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw ConfigError("significance level beta must lie in [0,1], got " + format_double(beta));
  if (!(min_node_weight > 0.0))
    throw ConfigError("min_node_weight must be positive");
  if (num_output_classes < kMinFuzzySets || num_output_classes > kMaxFuzzySets)
    throw ConfigError("number of output classes must be between 2 and 7, got " +
                      std::to_string(num_output_classes));
}

std::size_t FuzzyTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode &n) { return n.is_leaf(); }));
}

std::size_t FuzzyTree::depth() const {
  std::size_t d = 0;
  for (const auto &n : nodes)
    d = std::max(d, n.path.size());
  return d;
}

std::vector<std::size_t> FuzzyTree::variable_usage() const {
  std::vector<std::size_t> usage(variables.size(), 0);
  for (const auto &n : nodes)
    if (n.split_variable)
      ++usage[*n.split_variable];
  return usage;
}

std::size_t FuzzyTree::negative_gain_splits() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode &n) {
    return !n.is_leaf() && n.gain < 0.0;
  }));
}

std::size_t FuzzyTree::empty_leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode &n) {
    return n.is_leaf() && n.stats.retained == 0;
  }));
}

std::vector<double> FuzzyTree::input_memberships(std::size_t v, double x) const {
  const auto &p = variables.at(v).partition;
  if (!crisp)
    return p.memberships(x);
  std::vector<double> mu(p.size(), 0.0);
  mu[p.best_set(x)] = 1.0;
  return mu;
}

std::vector<double> class_proportions(std::span<const WeightedExample> examples, TNorm t,
                                      std::size_t num_classes) {
  std::vector<double> p(num_classes, 0.0);
  double total = 0.0;
  for (const auto &ex : examples) {
    for (std::size_t k = 0; k < num_classes; ++k) {
      const double m = tnorm_apply(t, ex.class_memberships[k], ex.node_membership);
      p[k] += m;
      total += m;
    }
  }
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(num_classes));
    return p;
  }
  for (auto &v : p)
    v /= total;
  return p;
}

double fuzzy_entropy(std::span<const double> proportions) {
  double h = 0.0;
  for (double p : proportions)
    if (p > 0.0)
      h -= p * std::log2(p);
  // Rounding can push a uniform vector a few ulps past log2(K).
  const double bound = std::log2(static_cast<double>(proportions.size()));
  return std::clamp(h, 0.0, std::max(bound, 0.0));
}

NodeStatistics node_statistics(std::span<const WeightedExample> examples, TNorm t,
                               std::size_t num_classes) {
  NodeStatistics s;
  s.retained = examples.size();
  double mass = 0.0;
  for (const auto &ex : examples) {
    s.total_weight += ex.node_membership;
    for (std::size_t k = 0; k < num_classes; ++k)
      mass += tnorm_apply(t, ex.class_memberships[k], ex.node_membership);
  }
  s.empty = !(mass > 0.0);
  s.proportions = class_proportions(examples, t, num_classes);
  s.entropy = fuzzy_entropy(s.proportions);
  return s;
}

double information_gain(const NodeStatistics &node, std::span<const NodeStatistics> children) {
  double total = 0.0;
  for (const auto &c : children)
    total += c.total_weight;
  if (!(total > 0.0))
    return 0.0;
  double remainder = 0.0;
  for (const auto &c : children)
    if (c.total_weight > 0.0)
      remainder += (c.total_weight / total) * c.entropy;
  return node.entropy - remainder;
}

namespace {

class Grower {
public:
  Grower(const Dataset &data, std::span<const InputVariable> inputs,
         const FuzzyPartition &output, const InductionConfig &cfg, bool crisp)
      : data_(data), inputs_(inputs.begin(), inputs.end()), output_(output), cfg_(cfg),
        crisp_(crisp) {
    cfg_.validate();
    if (data.empty())
      throw DataError(DataErrorKind::EmptyDataset, "cannot grow a tree from an empty dataset");
    if (static_cast<int>(output.size()) != cfg.num_output_classes)
      throw ConfigError("output partition has " + std::to_string(output.size()) +
                        " classes but the configuration asks for " +
                        std::to_string(cfg.num_output_classes));
    const std::size_t width = data.schema.attributes.size();
    for (const auto &in : inputs_) {
      if (in.attribute_index >= width)
        throw ConfigError("input variable '" + in.name() + "' has no attribute column");
      if (!(in.partition.domain_min() < in.partition.domain_max()))
        throw DataError(DataErrorKind::ConstantVariable,
                        "degenerate partition for '" + in.name() + "'");
    }

    min_effort_ = max_effort_ = data.records.front().effort;
    for (const auto &r : data.records) {
      if (r.attributes.size() != width)
        throw DataError(DataErrorKind::MissingValue, "record width does not match the schema");
      min_effort_ = std::min(min_effort_, r.effort);
      max_effort_ = std::max(max_effort_, r.effort);
    }

    memberships_.resize(data.size());
    class_mu_.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto &rec = data.records[i];
      for (const auto &in : inputs_)
        memberships_[i].push_back(indicate(in.partition, rec.attributes[in.attribute_index]));
      class_mu_[i] = indicate(output_, rec.effort);
    }
  }

  FuzzyTree grow() {
    std::vector<WeightedExample> root;
    root.reserve(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i)
      root.push_back({i, 1.0, class_mu_[i]});

    nodes_.emplace_back();
    std::vector<bool> used(inputs_.size(), false);
    expand(0, std::move(root), used, 0.0);

    FuzzyTree tree{data_.schema.attribute_names(), inputs_, output_, cfg_, crisp_,
                   nodes_.front().representative_effort, std::move(nodes_)};
    return tree;
  }

private:
  std::vector<double> indicate(const FuzzyPartition &p, double x) const {
    if (!crisp_)
      return p.memberships(x);
    std::vector<double> mu(p.size(), 0.0);
    mu[p.best_set(x)] = 1.0;
    return mu;
  }

  std::vector<WeightedExample> child_examples(std::span<const WeightedExample> parent,
                                              std::size_t v, std::size_t l) const {
    std::vector<WeightedExample> out;
    for (const auto &ex : parent) {
      const double u = tnorm_apply(cfg_.tnorm, ex.node_membership,
                                   memberships_[ex.record_index][v][l]);
      if (u > 0.0 && u >= cfg_.beta)
        out.push_back({ex.record_index, u, ex.class_memberships});
    }
    return out;
  }

  double representative(std::span<const WeightedExample> examples, double inherited) const {
    double num = 0.0, den = 0.0;
    for (const auto &ex : examples) {
      num += ex.node_membership * data_.records[ex.record_index].effort;
      den += ex.node_membership;
    }
    if (!(den > 0.0))
      return inherited;
    return std::clamp(num / den, min_effort_, max_effort_);
  }

  void expand(std::size_t id, std::vector<WeightedExample> examples, std::vector<bool> used,
              double inherited) {
    const std::size_t num_classes = output_.size();
    NodeStatistics stats = node_statistics(examples, cfg_.tnorm, num_classes);
    const double rep = representative(examples, inherited);
    nodes_[id].stats = stats;
    nodes_[id].representative_effort = rep;

    const bool all_used = std::all_of(used.begin(), used.end(), [](bool b) { return b; });
    if (examples.empty() || stats.total_weight < cfg_.min_node_weight ||
        stats.entropy <= kPureEntropy || all_used)
      return;

    std::optional<std::size_t> best;
    double best_gain = 0.0;
    std::vector<std::vector<WeightedExample>> best_children;
    for (std::size_t v = 0; v < inputs_.size(); ++v) {
      if (used[v])
        continue;
      const std::size_t m = inputs_[v].partition.size();
      std::vector<std::vector<WeightedExample>> children(m);
      std::vector<NodeStatistics> child_stats(m);
      for (std::size_t l = 0; l < m; ++l) {
        children[l] = child_examples(examples, v, l);
        child_stats[l] = node_statistics(children[l], cfg_.tnorm, num_classes);
      }
      const double gain = information_gain(stats, child_stats);
      if (!best || gain > best_gain + kGainTieTolerance) {
        best = v;
        best_gain = gain;
        best_children = std::move(children);
      }
    }

    const std::size_t v = *best;
    nodes_[id].split_variable = v;
    nodes_[id].gain = best_gain;
    used[v] = true;

    const std::size_t first_child = nodes_.size();
    const std::size_t m = best_children.size();
    const auto parent_path = nodes_[id].path;
    for (std::size_t l = 0; l < m; ++l) {
      TreeNode child;
      child.path = parent_path;
      child.path.push_back({v, l});
      nodes_.push_back(std::move(child));
      nodes_[id].children.push_back(first_child + l);
    }
    for (std::size_t l = 0; l < m; ++l)
      expand(first_child + l, std::move(best_children[l]), used, rep);
  }

  const Dataset &data_;
  std::vector<InputVariable> inputs_;
  FuzzyPartition output_;
  InductionConfig cfg_;
  bool crisp_;
  double min_effort_ = 0.0;
  double max_effort_ = 0.0;
  // memberships_[record][variable][set]
  std::vector<std::vector<std::vector<double>>> memberships_;
  std::vector<std::vector<double>> class_mu_;
  std::vector<TreeNode> nodes_;
};

} // namespace

FuzzyTree grow_fuzzy_tree(const Dataset &data, std::span<const InputVariable> inputs,
                          const FuzzyPartition &output_partition, const InductionConfig &cfg) {
  return Grower(data, inputs, output_partition, cfg, false).grow();
}

FuzzyTree grow_crisp_tree(const Dataset &data, std::span<const InputVariable> inputs,
                          const FuzzyPartition &output_partition, const InductionConfig &cfg) {
  return Grower(data, inputs, output_partition, cfg, true).grow();
}

int PartitionOptions::sets_for(const AttributeSpec &attr) const {
  for (const auto &[name, sets] : overrides)
    if (name == attr.name)
      return sets;
  return attr.num_sets.value_or(default_sets);
}

std::vector<InputVariable> make_input_variables(const Dataset &data,
                                                const PartitionOptions &opts) {
  if (data.empty())
    throw DataError(DataErrorKind::EmptyDataset, "cannot partition an empty dataset");
  std::vector<InputVariable> out;
  const auto &attrs = data.schema.attributes;
  for (std::size_t j = 0; j < attrs.size(); ++j) {
    double lo = data.records.front().attributes.at(j);
    double hi = lo;
    for (const auto &r : data.records) {
      lo = std::min(lo, r.attributes.at(j));
      hi = std::max(hi, r.attributes.at(j));
    }
    if (lo == hi)
      continue;
    out.push_back({j, build_uniform_partition(lo, hi, opts.sets_for(attrs[j]), attrs[j].name)});
  }
  if (out.empty())
    throw DataError(DataErrorKind::ConstantVariable, "every attribute is constant");
  return out;
}

FuzzyTree train(const Dataset &data, const TrainOptions &opts) {
  opts.induction.validate();
  if (data.empty())
    throw DataError(DataErrorKind::EmptyDataset, "cannot train on an empty dataset");
  const auto output = fuzzify_output(data.efforts(), opts.induction.num_output_classes);
  const auto inputs = make_input_variables(data, opts.partitions);
  return opts.crisp ? grow_crisp_tree(data, inputs, output, opts.induction)
                    : grow_fuzzy_tree(data, inputs, output, opts.induction);
}

} // namespace fid3
