#include "fid3/fuzzy.hpp"

#include "fid3/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fid3 {

const char *to_string(DataErrorKind kind) noexcept {
  switch (kind) {
  case DataErrorKind::Io: return "io";
  case DataErrorKind::EmptyFile: return "empty-file";
  case DataErrorKind::MissingColumn: return "missing-column";
  case DataErrorKind::NonNumeric: return "non-numeric";
  case DataErrorKind::MissingValue: return "missing-value";
  case DataErrorKind::NonPositiveEffort: return "non-positive-effort";
  case DataErrorKind::ConstantVariable: return "constant-variable";
  case DataErrorKind::ConstantTarget: return "constant-target";
  case DataErrorKind::EmptyDataset: return "empty-dataset";
  case DataErrorKind::BadSchema: return "bad-schema";
  case DataErrorKind::BadModel: return "bad-model";
  }
  return "unknown";
}

MembershipFunction MembershipFunction::left_shoulder(double a, double b) {
  if (!(a < b))
    throw ConfigError("left shoulder needs a < b");
  return {Kind::LeftShoulder, {a, b, b}};
}

MembershipFunction MembershipFunction::triangle(double a, double b, double c) {
  if (!(a < b && b < c))
    throw ConfigError("triangle needs a < b < c");
  return {Kind::Triangle, {a, b, c}};
}

MembershipFunction MembershipFunction::right_shoulder(double a, double b) {
  if (!(a < b))
    throw ConfigError("right shoulder needs a < b");
  return {Kind::RightShoulder, {a, b, b}};
}

std::span<const double> MembershipFunction::breakpoints() const noexcept {
  return {bp_.data(), kind_ == Kind::Triangle ? std::size_t{3} : std::size_t{2}};
}

double MembershipFunction::peak() const noexcept {
  switch (kind_) {
  case Kind::LeftShoulder: return bp_[0];
  case Kind::Triangle: return bp_[1];
  case Kind::RightShoulder: return bp_[1];
  }
  return bp_[0];
}

double MembershipFunction::operator()(double x) const noexcept {
  const double a = bp_[0], b = bp_[1], c = bp_[2];
  switch (kind_) {
  case Kind::LeftShoulder:
    if (x <= a) return 1.0;
    if (x >= b) return 0.0;
    return std::clamp((b - x) / (b - a), 0.0, 1.0);
  case Kind::RightShoulder:
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    return std::clamp((x - a) / (b - a), 0.0, 1.0);
  case Kind::Triangle:
    if (x <= a || x >= c) return 0.0;
    if (x == b) return 1.0;
    if (x < b) return std::clamp((x - a) / (b - a), 0.0, 1.0);
    return std::clamp((c - x) / (c - b), 0.0, 1.0);
  }
  return 0.0;
}

FuzzyPartition::FuzzyPartition(std::string variable, double domain_min, double domain_max,
                               std::vector<MembershipFunction> sets)
    : variable_(std::move(variable)), min_(domain_min), max_(domain_max), sets_(std::move(sets)) {
  using Kind = MembershipFunction::Kind;
  const auto m = static_cast<int>(sets_.size());
  if (m < kMinFuzzySets || m > kMaxFuzzySets)
    throw ConfigError("partition of '" + variable_ + "' must have between 2 and 7 sets");
  if (!(domain_min < domain_max))
    throw ConfigError("partition of '" + variable_ + "' needs a non-empty domain");
  if (sets_.front().kind() != Kind::LeftShoulder || sets_.back().kind() != Kind::RightShoulder)
    throw ConfigError("partition of '" + variable_ + "' must start and end with shoulders");
  for (int l = 1; l + 1 < m; ++l)
    if (sets_[l].kind() != Kind::Triangle)
      throw ConfigError("interior sets of '" + variable_ + "' must be triangles");
  for (int l = 1; l < m; ++l)
    if (!(sets_[l - 1].peak() < sets_[l].peak()))
      throw ConfigError("peaks of '" + variable_ + "' must be strictly increasing");
}

std::vector<double> FuzzyPartition::memberships(double x) const {
  std::vector<double> out;
  out.reserve(sets_.size());
  for (const auto &mf : sets_)
    out.push_back(mf(x));
  return out;
}

std::size_t FuzzyPartition::best_set(double x) const {
  std::size_t best = 0;
  double best_mu = sets_[0](x);
  for (std::size_t l = 1; l < sets_.size(); ++l) {
    const double mu = sets_[l](x);
    if (mu > best_mu) {
      best = l;
      best_mu = mu;
    }
  }
  return best;
}

std::vector<double> FuzzyPartition::peaks() const {
  std::vector<double> out;
  out.reserve(sets_.size());
  for (const auto &mf : sets_)
    out.push_back(mf.peak());
  return out;
}

FuzzyPartition build_uniform_partition(double domain_min, double domain_max, int num_sets,
                                       std::string variable) {
  if (num_sets < kMinFuzzySets || num_sets > kMaxFuzzySets)
    throw ConfigError("number of fuzzy sets must be between 2 and 7, got " +
                      std::to_string(num_sets));
  if (!std::isfinite(domain_min) || !std::isfinite(domain_max))
    throw ConfigError("partition domain must be finite");
  if (domain_min == domain_max)
    throw DataError(DataErrorKind::ConstantVariable,
                    "constant variable '" + variable + "': cannot partition a single value");
  if (domain_min > domain_max)
    throw ConfigError("partition domain must satisfy min < max");

  std::vector<double> peaks(static_cast<std::size_t>(num_sets));
  const double step = (domain_max - domain_min) / (num_sets - 1);
  for (int i = 0; i < num_sets; ++i)
    peaks[i] = domain_min + step * i;
  peaks.back() = domain_max;

  std::vector<MembershipFunction> sets;
  sets.reserve(peaks.size());
  sets.push_back(MembershipFunction::left_shoulder(peaks[0], peaks[1]));
  for (int i = 1; i + 1 < num_sets; ++i)
    sets.push_back(MembershipFunction::triangle(peaks[i - 1], peaks[i], peaks[i + 1]));
  sets.push_back(MembershipFunction::right_shoulder(peaks[num_sets - 2], peaks[num_sets - 1]));
  return FuzzyPartition(std::move(variable), domain_min, domain_max, std::move(sets));
}

FuzzyPartition fuzzify_output(std::span<const double> efforts, int num_classes) {
  if (efforts.empty())
    throw DataError(DataErrorKind::EmptyDataset, "no effort values to fuzzify");
  const auto [lo, hi] = std::minmax_element(efforts.begin(), efforts.end());
  if (*lo == *hi)
    throw DataError(DataErrorKind::ConstantTarget,
                    "constant target: every effort equals " + std::to_string(*lo));
  return build_uniform_partition(*lo, *hi, num_classes, "effort");
}

double tnorm_apply(TNorm t, double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw std::domain_error("t-norm arguments must lie in [0,1]");
  return t == TNorm::Minimum ? std::min(a, b) : a * b;
}

std::string_view to_string(TNorm t) noexcept {
  return t == TNorm::Minimum ? "minimum" : "product";
}

TNorm parse_tnorm(std::string_view name) {
  if (name == "min" || name == "minimum")
    return TNorm::Minimum;
  if (name == "prod" || name == "product")
    return TNorm::Product;
  throw ConfigError("unknown t-norm '" + std::string(name) + "' (expected min or product)");
}

} // namespace fid3
