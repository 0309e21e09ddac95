#include "fid3/evaluation.hpp"

#include "fid3/error.hpp"
#include "fid3/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <random>

namespace fid3 {

double mre(double actual, double estimated) {
  if (!(actual > 0.0))
    throw DataError(DataErrorKind::NonPositiveEffort,
                    "non-positive actual effort " + format_double(actual));
  return std::abs(actual - estimated) / actual;
}

double mmre(std::span<const EffortPair> pairs) {
  if (pairs.empty())
    throw DataError(DataErrorKind::EmptyDataset, "MMRE of an empty list");
  double sum = 0.0;
  for (const auto &p : pairs)
    sum += mre(p.actual, p.estimated);
  return sum / static_cast<double>(pairs.size()) * 100.0;
}

double pred(std::span<const EffortPair> pairs, double p) {
  if (pairs.empty())
    throw DataError(DataErrorKind::EmptyDataset, "Pred of an empty list");
  if (!(p >= 0.0))
    throw ConfigError("Pred level must be non-negative");
  const double limit = p / 100.0;
  std::size_t k = 0;
  for (const auto &pr : pairs)
    if (mre(pr.actual, pr.estimated) <= limit)
      ++k;
  return 100.0 * static_cast<double>(k) / static_cast<double>(pairs.size());
}

std::uint64_t HoldoutSplit::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(train.size());
  for (auto i : train)
    mix(i);
  mix(test.size());
  for (auto i : test)
    mix(i);
  return h;
}

std::string HoldoutSplit::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint()));
  return buf;
}

std::string HoldoutSplit::descriptor() const {
  const auto n = train.size() + test.size();
  return "holdout " + std::to_string(train.size()) + "/" + std::to_string(test.size()) +
         " of " + std::to_string(n) + " (fraction " + format_double(train_fraction) +
         ", seed " + std::to_string(seed) + ")";
}

HoldoutSplit holdout_split(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
  if (n < 2 || n_train == 0 || n_train >= n)
    throw DataError(DataErrorKind::EmptyDataset,
                    "a " + format_double(train_fraction) + " split of " + std::to_string(n) +
                        " record(s) would leave the train or test set empty");

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i)
    perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(perm[i], perm[j]);
  }

  HoldoutSplit split;
  split.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  split.train_fraction = train_fraction;
  split.seed = seed;
  return split;
}

HoldoutSplit holdout_split(const Dataset &data, double train_fraction, std::uint64_t seed) {
  return holdout_split(data.size(), train_fraction, seed);
}

EvaluationReport make_report(std::vector<ProjectEstimate> estimates, RunDescriptor config) {
  std::vector<EffortPair> pairs;
  pairs.reserve(estimates.size());
  for (auto &e : estimates) {
    e.mre = mre(e.actual, e.estimated);
    pairs.push_back({e.actual, e.estimated});
  }
  EvaluationReport report;
  report.mmre = mmre(pairs);
  report.pred25 = pred(pairs, 25.0);
  report.per_project = std::move(estimates);
  report.config = std::move(config);
  return report;
}

EvaluationReport evaluate(const FuzzyTree &tree, const Dataset &data,
                          std::span<const std::size_t> indices, RunDescriptor config) {
  std::vector<std::size_t> all;
  if (indices.empty()) {
    all.resize(data.size());
    for (std::size_t i = 0; i < all.size(); ++i)
      all[i] = i;
    indices = all;
  }
  std::vector<ProjectEstimate> estimates;
  estimates.reserve(indices.size());
  for (auto i : indices) {
    const auto &rec = data.records.at(i);
    estimates.push_back({i, rec.effort, predict(tree, rec.attributes), 0.0});
  }
  return make_report(std::move(estimates), std::move(config));
}

std::string model_label(TNorm t) { return t == TNorm::Product ? "Model 1" : "Model 2"; }

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k)
    grid.push_back(k / 10.0);
  return grid;
}

namespace {

SweepCell run_cell(const Dataset &train_data, const Dataset &data, const HoldoutSplit &split,
                   TrainOptions opts, double beta, TNorm tnorm, bool report_training) {
  SweepCell cell;
  cell.beta = beta;
  cell.tnorm = tnorm;
  cell.split_fingerprint = split.fingerprint();
  try {
    opts.induction.beta = beta;
    opts.induction.tnorm = tnorm;
    const FuzzyTree tree = train(train_data, opts);
    cell.leaves = tree.leaf_count();
    const RunDescriptor desc{opts.crisp ? "crisp" : "fuzzy", tnorm, beta, split.descriptor(),
                             split.seed};
    cell.test = evaluate(tree, data, split.test, desc);
    if (report_training)
      cell.training = evaluate(tree, data, split.train, desc);
  } catch (const std::exception &e) {
    cell.test.reset();
    cell.training.reset();
    cell.failure = e.what();
  }
  return cell;
}

void check_split(const Dataset &data, const HoldoutSplit &split) {
  if (split.train.empty() || split.test.empty())
    throw DataError(DataErrorKind::EmptyDataset, "split has an empty train or test set");
  for (auto i : split.train)
    if (i >= data.size())
      throw ConfigError("split index out of range");
  for (auto i : split.test)
    if (i >= data.size())
      throw ConfigError("split index out of range");
}

void check_betas(const std::vector<double> &betas) {
  if (betas.empty())
    throw ConfigError("beta grid is empty");
  for (double b : betas)
    if (!(b >= 0.0 && b <= 1.0))
      throw ConfigError("significance level beta must lie in [0,1], got " + format_double(b));
}

} // namespace

SweepTable run_sweep(const Dataset &data, const SweepOptions &opts, const HoldoutSplit &split) {
  check_betas(opts.betas);
  if (opts.tnorms.empty())
    throw ConfigError("no t-norms to sweep");
  check_split(data, split);

  const Dataset train_data = data.subset(split.train);
  SweepTable table;
  table.betas = opts.betas;
  table.tnorms = opts.tnorms;
  table.split = split;
  table.dataset_name = data.schema.name;
  table.dataset_size = data.size();

  const std::size_t rows = opts.betas.size();
  const std::size_t cols = opts.tnorms.size();
  std::vector<std::future<SweepCell>> futures;
  table.cells.assign(rows, std::vector<SweepCell>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto policy = opts.parallel ? std::launch::async : std::launch::deferred;
      futures.push_back(std::async(policy, run_cell, std::cref(train_data), std::cref(data),
                                   std::cref(split), opts.base, opts.betas[r], opts.tnorms[c],
                                   opts.report_training));
    }
  }
  // Merge in fixed (beta, t-norm) order regardless of completion order.
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.cells[r][c] = futures[r * cols + c].get();
  return table;
}

double mmre_improvement(double crisp_mmre, double fuzzy_mmre) {
  if (crisp_mmre == 0.0)
    return fuzzy_mmre == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (crisp_mmre - fuzzy_mmre) / crisp_mmre;
}

std::optional<std::size_t> Comparison::best_mmre() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].report && (!best || rows[i].report->mmre < rows[*best].report->mmre))
      best = i;
  return best;
}

std::optional<std::size_t> Comparison::best_pred() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].report && (!best || rows[i].report->pred25 > rows[*best].report->pred25))
      best = i;
  return best;
}

std::optional<double> Comparison::improvement(std::size_t row) const {
  const ComparisonRow *crisp = nullptr;
  for (const auto &r : rows)
    if (r.crisp)
      crisp = &r;
  if (!crisp || !crisp->report || row >= rows.size() || !rows[row].report)
    return std::nullopt;
  return mmre_improvement(crisp->report->mmre, rows[row].report->mmre);
}

Comparison compare_models(const Dataset &data, const CompareOptions &opts,
                          const HoldoutSplit &split) {
  check_betas(opts.betas);
  check_split(data, split);
  const Dataset train_data = data.subset(split.train);

  Comparison cmp;
  cmp.split = split;
  cmp.dataset_name = data.schema.name;

  ComparisonRow crisp{"Crisp ID3", true, opts.base.induction.tnorm, std::nullopt, {}, {}};
  {
    TrainOptions o = opts.base;
    o.crisp = true;
    SweepCell cell = run_cell(train_data, data, split, o, o.induction.beta, o.induction.tnorm,
                              false);
    crisp.report = std::move(cell.test);
    crisp.failure = std::move(cell.failure);
  }
  cmp.rows.push_back(std::move(crisp));

  SweepOptions sweep;
  sweep.base = opts.base;
  sweep.base.crisp = false;
  sweep.betas = opts.betas;
  const SweepTable table = run_sweep(data, sweep, split);

  for (std::size_t c = 0; c < table.tnorms.size(); ++c) {
    const TNorm t = table.tnorms[c];
    ComparisonRow row{model_label(t) + " (" + std::string(to_string(t)) + ")", false, t,
                      std::nullopt, std::nullopt, {}};
    const SweepCell *best = nullptr;
    for (std::size_t r = 0; r < table.betas.size(); ++r) {
      const SweepCell &cell = table.cells[r][c];
      if (!cell.ok()) {
        if (row.failure.empty())
          row.failure = cell.failure;
        continue;
      }
      if (!best || cell.test->mmre < best->test->mmre ||
          (cell.test->mmre == best->test->mmre &&
           (cell.test->pred25 > best->test->pred25 ||
            (cell.test->pred25 == best->test->pred25 && cell.beta < best->beta))))
        best = &cell;
    }
    if (best) {
      row.beta = best->beta;
      row.report = best->test;
      row.failure.clear();
    }
    cmp.rows.push_back(std::move(row));
  }
  return cmp;
}

} // namespace fid3
