#pragma once

#include "fid3/evaluation.hpp"

#include <string>
#include <string_view>

namespace fid3 {

enum class ReportFormat { Text, Csv, Json };

/// "text", "csv" or "json". Throws ConfigError otherwise.
ReportFormat parse_format(std::string_view name);

/// Fixed four-decimal rendering shared by the text and CSV tables.
std::string format_metric(double v);

/// Per-project estimates followed by MMRE / Pred(25) and their acceptability flags.
std::string render(const EvaluationReport &report, ReportFormat format);

/// Sweep laid out like the accuracy tables: one row per beta, an
/// (MMRE, Pred(25)) column pair per t-norm, product first.
std::string render(const SweepTable &table, ReportFormat format);

/// Crisp ID3 vs Model 1 vs Model 2 with best-per-column markers and the MMRE
/// improvement over crisp.
std::string render(const Comparison &cmp, ReportFormat format);

} // namespace fid3
