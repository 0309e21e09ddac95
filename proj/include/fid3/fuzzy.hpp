#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fid3 {

/// Largest partition size accepted anywhere in the toolkit.
inline constexpr int kMaxFuzzySets = 7;
inline constexpr int kMinFuzzySets = 2;

/// Piecewise-linear membership function.
///
/// Shoulders use two breakpoints (a, b): a left shoulder is 1 up to a and
/// falls to 0 at b, a right shoulder is 0 up to a and rises to 1 at b.
/// Triangles use three breakpoints (a, b, c) and peak at b.
class MembershipFunction {
public:
  enum class Kind { LeftShoulder, Triangle, RightShoulder };

  static MembershipFunction left_shoulder(double a, double b);
  static MembershipFunction triangle(double a, double b, double c);
  static MembershipFunction right_shoulder(double a, double b);

  Kind kind() const noexcept { return kind_; }
  std::span<const double> breakpoints() const noexcept;

  /// Point where the function reaches 1 (saturation breakpoint for shoulders).
  double peak() const noexcept;

  /// Degree in [0,1]; total over the reals, saturating at the shoulders.
  double operator()(double x) const noexcept;

  bool operator==(const MembershipFunction &) const = default;

private:
  MembershipFunction(Kind kind, std::array<double, 3> bp) : kind_(kind), bp_(bp) {}

  Kind kind_;
  std::array<double, 3> bp_;
};

/// Ordered strong partition of one variable's domain.
class FuzzyPartition {
public:
  /// Throws ConfigError when the sets do not form a shoulder/triangles/shoulder
  /// sequence with strictly increasing peaks.
  FuzzyPartition(std::string variable, double domain_min, double domain_max,
                 std::vector<MembershipFunction> sets);

  const std::string &variable() const noexcept { return variable_; }
  double domain_min() const noexcept { return min_; }
  double domain_max() const noexcept { return max_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const MembershipFunction &operator[](std::size_t l) const { return sets_[l]; }
  const std::vector<MembershipFunction> &sets() const noexcept { return sets_; }

  /// Membership of x in every set, in partition order.
  std::vector<double> memberships(double x) const;

  /// Index of the set with highest membership; ties go to the lower index.
  std::size_t best_set(double x) const;

  double peak(std::size_t l) const { return sets_[l].peak(); }
  std::vector<double> peaks() const;

  bool operator==(const FuzzyPartition &) const = default;

private:
  std::string variable_;
  double min_;
  double max_;
  std::vector<MembershipFunction> sets_;
};

/// Equally spaced peaks over [domain_min, domain_max]; triangle feet sit on
/// the neighbouring peaks. Throws DataError(ConstantVariable) when
/// domain_min == domain_max and ConfigError on a bad range or set count.
FuzzyPartition build_uniform_partition(double domain_min, double domain_max, int num_sets,
                                       std::string variable = {});

/// Uniform partition over the observed effort range. Class k's representative
/// value is peak(k). Throws DataError(ConstantTarget) when every effort is equal.
FuzzyPartition fuzzify_output(std::span<const double> efforts, int num_classes);

enum class TNorm { Minimum, Product };

/// Throws std::domain_error unless a and b lie in [0,1].
double tnorm_apply(TNorm t, double a, double b);

std::string_view to_string(TNorm t) noexcept;
/// Accepts "min"/"minimum" and "prod"/"product" (case-sensitive). Throws ConfigError.
TNorm parse_tnorm(std::string_view name);

} // namespace fid3
