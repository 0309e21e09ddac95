#include "fid3/inference.hpp"

#include "fid3/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fid3 {

namespace {

double value_of(const FuzzyTree &tree, std::span<const double> x, std::size_t v) {
  const std::size_t col = tree.variables[v].attribute_index;
  if (col >= x.size() || std::isnan(x[col]))
    throw DataError(DataErrorKind::MissingValue,
                    "missing value for attribute '" + tree.variables[v].name() + "'");
  return x[col];
}

void descend(const FuzzyTree &tree, std::span<const double> x, std::size_t id, double strength,
             std::vector<FiringAssignment> &out) {
  const TreeNode &node = tree.nodes[id];
  if (node.is_leaf()) {
    out.push_back({id, strength});
    return;
  }
  const std::size_t v = *node.split_variable;
  const auto mu = tree.input_memberships(v, value_of(tree, x, v));
  for (std::size_t l = 0; l < node.children.size(); ++l) {
    if (mu[l] <= 0.0)
      continue;
    const double s = tnorm_apply(tree.config.tnorm, strength, mu[l]);
    if (s > 0.0)
      descend(tree, x, node.children[l], s, out);
  }
}

} // namespace

std::vector<FiringAssignment> fire(const FuzzyTree &tree, std::span<const double> x) {
  std::vector<FiringAssignment> out;
  if (tree.nodes.empty())
    return out;
  // Every input variable must be present even when its branch never fires.
  for (std::size_t v = 0; v < tree.variables.size(); ++v)
    value_of(tree, x, v);
  descend(tree, x, 0, 1.0, out);
  return out;
}

double predict(const FuzzyTree &tree, std::span<const double> x) {
  double num = 0.0, den = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &f : fire(tree, x)) {
    const double rep = tree.nodes[f.leaf_id].representative_effort;
    num += f.strength * rep;
    den += f.strength;
    lo = std::min(lo, rep);
    hi = std::max(hi, rep);
  }
  if (!(den > 0.0))
    return tree.fallback_effort;
  return std::clamp(num / den, lo, hi);
}

std::vector<double> predict_batch(const FuzzyTree &tree,
                                  std::span<const std::vector<double>> inputs) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto &x : inputs)
    out.push_back(predict(tree, x));
  return out;
}

} // namespace fid3
