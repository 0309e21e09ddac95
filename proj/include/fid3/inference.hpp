#pragma once

#include "fid3/tree.hpp"

#include <span>
#include <vector>

namespace fid3 {

struct FiringAssignment {
  std::size_t leaf_id;
  double strength;

  bool operator==(const FiringAssignment &) const = default;
};

/// Leaves reached by `x` with non-zero strength, in node-id order. Strength is
/// the t-norm fold of the memberships along the leaf's path. `x` is a full
/// attribute vector in the tree's schema order; NaN counts as missing.
/// Throws DataError(MissingValue) when a split variable has no value.
std::vector<FiringAssignment> fire(const FuzzyTree &tree, std::span<const double> x);

/// Strength-weighted mean of the fired leaves' representative efforts.
double predict(const FuzzyTree &tree, std::span<const double> x);

std::vector<double> predict_batch(const FuzzyTree &tree,
                                  std::span<const std::vector<double>> inputs);

} // namespace fid3
