#pragma once

#include "fid3/tree.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fid3 {

/// MMRE at or below this percentage marks an acceptable model.
inline constexpr double kAcceptableMmre = 25.0;
/// Pred(25) at or above this percentage marks an acceptable model.
inline constexpr double kAcceptablePred = 75.0;

struct EffortPair {
  double actual;
  double estimated;
};

/// |actual - estimated| / actual as a ratio. Throws DataError(NonPositiveEffort)
/// when actual <= 0.
double mre(double actual, double estimated);
/// Mean MRE in percent. Throws DataError(EmptyDataset) on an empty list.
double mmre(std::span<const EffortPair> pairs);
/// Percentage of pairs with MRE <= p/100 (inclusive).
double pred(std::span<const EffortPair> pairs, double p);

inline bool mmre_acceptable(double mmre_percent) { return mmre_percent <= kAcceptableMmre; }
inline bool pred_acceptable(double pred_percent) { return pred_percent >= kAcceptablePred; }

/// Single train/test holdout. Index lists are sorted and refer to dataset positions.
struct HoldoutSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;

  /// FNV-1a hash of both index lists; equal splits have equal fingerprints.
  std::uint64_t fingerprint() const;
  std::string fingerprint_hex() const;
  /// e.g. "holdout 70/30 seed=0".
  std::string descriptor() const;
};

/// Seeded Fisher-Yates permutation (std::mt19937_64, modulo reduction), then
/// the first round(n * train_fraction) positions become the training set.
HoldoutSplit holdout_split(std::size_t n, double train_fraction, std::uint64_t seed);
HoldoutSplit holdout_split(const Dataset &data, double train_fraction, std::uint64_t seed);

struct ProjectEstimate {
  std::size_t record_index;
  double actual;
  double estimated;
  double mre;
};

struct RunDescriptor {
  std::string model = "fuzzy";
  TNorm tnorm = TNorm::Product;
  double beta = 0.0;
  std::string split;
  std::uint64_t seed = 0;
};

struct EvaluationReport {
  std::vector<ProjectEstimate> per_project;
  double mmre = 0.0;
  double pred25 = 0.0;
  RunDescriptor config;

  bool mmre_acceptable() const { return fid3::mmre_acceptable(mmre); }
  bool pred_acceptable() const { return fid3::pred_acceptable(pred25); }
};

/// Builds a report from explicit estimates.
EvaluationReport make_report(std::vector<ProjectEstimate> estimates, RunDescriptor config);

/// Predicts every record at `indices` (all records when empty) and scores it.
EvaluationReport evaluate(const FuzzyTree &tree, const Dataset &data,
                          std::span<const std::size_t> indices, RunDescriptor config);

/// "Model 1" for the product t-norm, "Model 2" for minimum.
std::string model_label(TNorm t);

std::vector<double> default_beta_grid();

struct SweepOptions {
  TrainOptions base;
  std::vector<double> betas = default_beta_grid();
  std::vector<TNorm> tnorms{TNorm::Product, TNorm::Minimum};
  /// Also score each cell on its training set.
  bool report_training = false;
  bool parallel = true;
};

struct SweepCell {
  double beta = 0.0;
  TNorm tnorm = TNorm::Product;
  std::optional<EvaluationReport> test;
  std::optional<EvaluationReport> training;
  std::string failure;
  std::size_t leaves = 0;
  /// Fingerprint of the split this cell was trained and scored on.
  std::uint64_t split_fingerprint = 0;

  bool ok() const { return test.has_value(); }
};

struct SweepTable {
  std::vector<double> betas;
  std::vector<TNorm> tnorms;
  /// cells[row][column]: rows follow betas, columns follow tnorms.
  std::vector<std::vector<SweepCell>> cells;
  HoldoutSplit split;
  std::string dataset_name;
  std::size_t dataset_size = 0;
};

/// Trains one tree per (beta, t-norm) on split.train and scores it on split.test.
/// Cell failures are recorded in the cell; the sweep carries on.
SweepTable run_sweep(const Dataset &data, const SweepOptions &opts, const HoldoutSplit &split);

struct ComparisonRow {
  std::string name;
  bool crisp = false;
  TNorm tnorm = TNorm::Product;
  /// Significance level of the selected configuration (fuzzy rows).
  std::optional<double> beta;
  std::optional<EvaluationReport> report;
  std::string failure;
};

struct Comparison {
  /// Crisp ID3, Model 1 (product), Model 2 (minimum).
  std::vector<ComparisonRow> rows;
  HoldoutSplit split;
  std::string dataset_name;

  /// Row index with the lowest MMRE / highest Pred(25); first wins ties.
  std::optional<std::size_t> best_mmre() const;
  std::optional<std::size_t> best_pred() const;
  /// MMRE improvement of `row` over the crisp row, in percent.
  std::optional<double> improvement(std::size_t row) const;
};

/// 100 * (crisp - fuzzy) / crisp. Zero when both are zero, NaN when only crisp is.
double mmre_improvement(double crisp_mmre, double fuzzy_mmre);

struct CompareOptions {
  TrainOptions base;
  /// Candidate significance levels; each fuzzy model keeps its best
  /// (lowest MMRE, then highest Pred(25), then lowest beta).
  std::vector<double> betas = default_beta_grid();
};

Comparison compare_models(const Dataset &data, const CompareOptions &opts,
                          const HoldoutSplit &split);

} // namespace fid3
