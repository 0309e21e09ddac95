#include "fid3/report.hpp"

#include "fid3/error.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fid3 {

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kCol = 14;

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width)
    s.append(width - s.size(), ' ');
  return s;
}

std::string lower(std::string s) {
  for (auto &ch : s)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string title(TNorm t) { return t == TNorm::Product ? "Product" : "Minimum"; }

std::string column_key(TNorm t) {
  return lower(model_label(t)).replace(5, 1, "") + "_" + std::string(to_string(t));
}

std::string rstrip_lines(const std::string &text) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line.erase(line.find_last_not_of(' ') + 1);
    out += line;
    out += '\n';
  }
  return out;
}

std::string flag(bool ok) { return ok ? "acceptable" : "not acceptable"; }

ojson descriptor_json(const RunDescriptor &d) {
  return ojson{{"model", d.model},
               {"tnorm", std::string(to_string(d.tnorm))},
               {"beta", d.beta},
               {"split", d.split},
               {"seed", d.seed}};
}

ojson split_json(const HoldoutSplit &s) {
  return ojson{{"train_fraction", s.train_fraction},
               {"seed", s.seed},
               {"train_size", s.train.size()},
               {"test_size", s.test.size()},
               {"fingerprint", s.fingerprint_hex()}};
}

ojson report_json(const EvaluationReport &r) {
  ojson per = ojson::array();
  for (const auto &e : r.per_project)
    per.push_back(ojson{{"record_index", e.record_index},
                        {"actual", e.actual},
                        {"estimated", e.estimated},
                        {"mre", e.mre}});
  return ojson{{"config", descriptor_json(r.config)},
               {"mmre", r.mmre},
               {"pred25", r.pred25},
               {"mmre_acceptable", r.mmre_acceptable()},
               {"pred25_acceptable", r.pred_acceptable()},
               {"per_project", per}};
}

std::string metric_or(const std::optional<EvaluationReport> &r, double EvaluationReport::*field,
                      const char *missing) {
  return r ? format_metric((*r).*field) : std::string(missing);
}

} // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "text")
    return ReportFormat::Text;
  if (name == "csv")
    return ReportFormat::Csv;
  if (name == "json")
    return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(name) + "' (expected text, csv or json)");
}

std::string format_metric(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string render(const EvaluationReport &report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
  case ReportFormat::Json:
    out << report_json(report).dump(1) << '\n';
    break;
  case ReportFormat::Csv:
    out << "record_index,actual_effort,estimated_effort,mre\n";
    for (const auto &e : report.per_project)
      out << e.record_index << ',' << format_double(e.actual) << ',' << format_double(e.estimated)
          << ',' << format_double(e.mre) << '\n';
    break;
  case ReportFormat::Text: {
    const auto &c = report.config;
    out << "# evaluation model=" << c.model << " tnorm=" << to_string(c.tnorm)
        << " beta=" << format_double(c.beta) << " split=" << c.split << '\n';
    out << pad("record", kCol) << pad("actual", kCol) << pad("estimated", kCol) << "MRE\n";
    for (const auto &e : report.per_project)
      out << pad(std::to_string(e.record_index), kCol) << pad(format_metric(e.actual), kCol)
          << pad(format_metric(e.estimated), kCol) << format_metric(e.mre) << '\n';
    out << "MMRE      " << format_metric(report.mmre) << "  " << flag(report.mmre_acceptable())
        << " (MMRE <= 25)\n";
    out << "Pred(25)  " << format_metric(report.pred25) << "  " << flag(report.pred_acceptable())
        << " (Pred(25) >= 75)\n";
    break;
  }
  }
  return format == ReportFormat::Text ? rstrip_lines(out.str()) : out.str();
}

std::string render(const SweepTable &table, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
  case ReportFormat::Json: {
    ojson j;
    j["dataset"] = table.dataset_name;
    j["records"] = table.dataset_size;
    j["split"] = split_json(table.split);
    j["betas"] = table.betas;
    ojson models = ojson::array();
    for (auto t : table.tnorms)
      models.push_back(ojson{{"label", model_label(t)}, {"tnorm", std::string(to_string(t))}});
    j["models"] = models;
    ojson rows = ojson::array();
    for (std::size_t r = 0; r < table.betas.size(); ++r) {
      ojson cells = ojson::array();
      for (const auto &cell : table.cells[r]) {
        ojson jc{{"model", model_label(cell.tnorm)},
                 {"tnorm", std::string(to_string(cell.tnorm))},
                 {"ok", cell.ok()}};
        if (cell.ok()) {
          jc["mmre"] = cell.test->mmre;
          jc["pred25"] = cell.test->pred25;
          jc["mmre_acceptable"] = cell.test->mmre_acceptable();
          jc["pred25_acceptable"] = cell.test->pred_acceptable();
          jc["leaves"] = cell.leaves;
          if (cell.training) {
            jc["train_mmre"] = cell.training->mmre;
            jc["train_pred25"] = cell.training->pred25;
          }
        } else {
          jc["failure"] = cell.failure;
        }
        cells.push_back(std::move(jc));
      }
      rows.push_back(ojson{{"beta", table.betas[r]}, {"cells", cells}});
    }
    j["rows"] = rows;
    out << j.dump(1) << '\n';
    break;
  }
  case ReportFormat::Csv: {
    out << "beta";
    for (auto t : table.tnorms)
      out << ',' << column_key(t) << "_mmre," << column_key(t) << "_pred25";
    out << '\n';
    for (std::size_t r = 0; r < table.betas.size(); ++r) {
      out << format_double(table.betas[r]);
      for (const auto &cell : table.cells[r])
        out << ',' << metric_or(cell.test, &EvaluationReport::mmre, "failed") << ','
            << metric_or(cell.test, &EvaluationReport::pred25, "failed");
      out << '\n';
    }
    break;
  }
  case ReportFormat::Text: {
    out << "# sweep dataset=" << table.dataset_name << " records=" << table.dataset_size
        << " split=" << table.split.descriptor() << " fingerprint=" << table.split.fingerprint_hex()
        << '\n';
    for (auto t : table.tnorms)
      out << "# " << model_label(t) << " computes fuzzy entropy with the " << to_string(t)
          << " t-norm\n";
    const std::size_t first = 24;
    out << pad("", first);
    for (auto t : table.tnorms)
      out << pad(model_label(t) + " (T-norm = " + title(t) + ")", 2 * kCol);
    out << '\n' << pad("Significance level", first);
    for (std::size_t c = 0; c < table.tnorms.size(); ++c)
      out << pad("MMRE", kCol) << pad("Pred(25)", kCol);
    out << '\n';
    std::vector<std::string> notes;
    for (std::size_t r = 0; r < table.betas.size(); ++r) {
      out << pad(format_double(table.betas[r]), first);
      for (const auto &cell : table.cells[r]) {
        if (cell.ok()) {
          out << pad(format_metric(cell.test->mmre), kCol)
              << pad(format_metric(cell.test->pred25), kCol);
        } else {
          notes.push_back(cell.failure);
          const std::string tag = "failed[" + std::to_string(notes.size()) + "]";
          out << pad(tag, kCol) << pad(tag, kCol);
        }
      }
      out << '\n';
    }
    for (std::size_t i = 0; i < notes.size(); ++i)
      out << "[" << i + 1 << "] " << notes[i] << '\n';
    break;
  }
  }
  return format == ReportFormat::Text ? rstrip_lines(out.str()) : out.str();
}

std::string render(const Comparison &cmp, ReportFormat format) {
  const auto best_m = cmp.best_mmre();
  const auto best_p = cmp.best_pred();
  std::ostringstream out;
  switch (format) {
  case ReportFormat::Json: {
    ojson j;
    j["dataset"] = cmp.dataset_name;
    j["split"] = split_json(cmp.split);
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
      const auto &row = cmp.rows[i];
      ojson jr{{"name", row.name}, {"crisp", row.crisp}, {"ok", row.report.has_value()}};
      if (!row.crisp)
        jr["tnorm"] = std::string(to_string(row.tnorm));
      if (row.beta)
        jr["beta"] = *row.beta;
      if (row.report) {
        jr["mmre"] = row.report->mmre;
        jr["pred25"] = row.report->pred25;
        jr["best_mmre"] = best_m == i;
        jr["best_pred25"] = best_p == i;
        if (!row.crisp) {
          const auto imp = cmp.improvement(i);
          jr["improvement_pct"] = imp && !std::isnan(*imp) ? ojson(*imp) : ojson(nullptr);
        }
      } else {
        jr["failure"] = row.failure;
      }
      rows.push_back(std::move(jr));
    }
    j["rows"] = rows;
    out << j.dump(1) << '\n';
    break;
  }
  case ReportFormat::Csv: {
    out << "criterion";
    for (const auto &row : cmp.rows)
      out << ',' << row.name;
    out << '\n';
    auto line = [&](const char *name, auto &&cell) {
      out << name;
      for (std::size_t i = 0; i < cmp.rows.size(); ++i)
        out << ',' << cell(i);
      out << '\n';
    };
    line("MMRE", [&](std::size_t i) {
      return metric_or(cmp.rows[i].report, &EvaluationReport::mmre, "failed");
    });
    line("Pred(25)", [&](std::size_t i) {
      return metric_or(cmp.rows[i].report, &EvaluationReport::pred25, "failed");
    });
    line("beta", [&](std::size_t i) {
      return cmp.rows[i].beta ? format_double(*cmp.rows[i].beta) : std::string();
    });
    line("improvement_pct", [&](std::size_t i) {
      if (cmp.rows[i].crisp)
        return std::string();
      const auto imp = cmp.improvement(i);
      return imp ? format_metric(*imp) : std::string();
    });
    break;
  }
  case ReportFormat::Text: {
    out << "# compare dataset=" << cmp.dataset_name << " split=" << cmp.split.descriptor()
        << " fingerprint=" << cmp.split.fingerprint_hex() << '\n';
    out << "# * marks the best value per criterion\n";
    const std::size_t first = 24;
    const std::size_t col = 24;
    out << pad("Performance Criteria", first);
    for (const auto &row : cmp.rows)
      out << pad(row.name, col);
    out << '\n';
    auto line = [&](const std::string &name, auto &&cell) {
      out << pad(name, first);
      for (std::size_t i = 0; i < cmp.rows.size(); ++i)
        out << pad(cell(i), col);
      out << '\n';
    };
    line("MMRE", [&](std::size_t i) {
      return metric_or(cmp.rows[i].report, &EvaluationReport::mmre, "failed") +
             (best_m == i ? " *" : "");
    });
    line("Pred(25)", [&](std::size_t i) {
      return metric_or(cmp.rows[i].report, &EvaluationReport::pred25, "failed") +
             (best_p == i ? " *" : "");
    });
    line("Significance level", [&](std::size_t i) {
      return cmp.rows[i].beta ? format_double(*cmp.rows[i].beta) : std::string("-");
    });
    line("MMRE improvement (%)", [&](std::size_t i) {
      if (cmp.rows[i].crisp)
        return std::string("-");
      const auto imp = cmp.improvement(i);
      return imp ? format_metric(*imp) : std::string("n/a");
    });
    for (const auto &row : cmp.rows)
      if (!row.report)
        out << "# " << row.name << " failed: " << row.failure << '\n';
    break;
  }
  }
  return format == ReportFormat::Text ? rstrip_lines(out.str()) : out.str();
}

} // namespace fid3
