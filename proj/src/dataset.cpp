#include "fid3/dataset.hpp"

#include "fid3/error.hpp"
#include "fid3/fuzzy.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace fid3 {

namespace {

AttributeSpec attr(std::string name) { return AttributeSpec{std::move(name), {}, std::nullopt}; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cell : trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell += ch;
    }
  }
  cells.push_back(was_quoted ? cell : trim(cell));
  return cells;
}

std::string quote_if_needed(const std::string &cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos)
    return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  return out + '"';
}

std::size_t require_column(const CsvTable &table, const std::string &name) {
  auto idx = table.column(name);
  if (!idx)
    throw DataError(DataErrorKind::MissingColumn, "missing column '" + name + "'");
  return *idx;
}

double parse_cell(const CsvTable &table, std::size_t row, std::size_t col) {
  const auto &cells = table.rows[row];
  const std::string &name = table.header[col];
  const std::string where = "row " + std::to_string(row + 1) + ", column '" + name + "'";
  if (col >= cells.size() || cells[col].empty())
    throw DataError(DataErrorKind::MissingValue, "missing value at " + where);
  auto v = parse_double(cells[col]);
  if (!v)
    throw DataError(DataErrorKind::NonNumeric,
                    "non-numeric value '" + cells[col] + "' at " + where);
  return *v;
}

void check_missing_columns(const CsvTable &table, const DatasetSchema &schema, bool need_effort) {
  std::vector<std::string> missing;
  for (const auto &a : schema.attributes)
    if (!table.column(a.column_name()))
      missing.push_back(a.column_name());
  if (need_effort && !table.column(schema.effort_column))
    missing.push_back(schema.effort_column);
  if (missing.empty())
    return;
  std::string msg = "schema mismatch, missing column(s):";
  for (const auto &m : missing)
    msg += " " + m;
  throw DataError(DataErrorKind::MissingColumn, msg);
}

} // namespace

std::vector<std::string> DatasetSchema::attribute_names() const {
  std::vector<std::string> out;
  out.reserve(attributes.size());
  for (const auto &a : attributes)
    out.push_back(a.name);
  return out;
}

void DatasetSchema::validate() const {
  if (attributes.empty())
    throw DataError(DataErrorKind::BadSchema, "schema '" + name + "' has no attributes");
  std::set<std::string> seen;
  for (const auto &a : attributes) {
    if (a.name.empty())
      throw DataError(DataErrorKind::BadSchema, "schema '" + name + "' has an unnamed attribute");
    if (!seen.insert(a.name).second)
      throw DataError(DataErrorKind::BadSchema, "duplicate attribute '" + a.name + "'");
    if (a.name == effort_column || a.column_name() == effort_column)
      throw DataError(DataErrorKind::BadSchema,
                      "effort column '" + effort_column + "' is also an attribute");
    if (a.num_sets && (*a.num_sets < kMinFuzzySets || *a.num_sets > kMaxFuzzySets))
      throw DataError(DataErrorKind::BadSchema,
                      "fuzzy-set count for '" + a.name + "' must be between 2 and 7");
  }
}

std::vector<double> Dataset::efforts() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto &r : records)
    out.push_back(r.effort);
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out{schema, {}};
  out.records.reserve(indices.size());
  for (auto i : indices)
    out.records.push_back(records.at(i));
  return out;
}

const DatasetSchema &tukutuku_schema() {
  static const DatasetSchema schema{
      "tukutuku",
      {attr("TeamExp"), attr("DevTeam"), attr("TotWP"), attr("TextPages"), attr("TotImg"),
       attr("Anim"), attr("AV"), attr("TotHigh"), attr("TotNHigh")},
      "Effort"};
  return schema;
}

const DatasetSchema &cocomo81_schema() {
  static const DatasetSchema schema{
      "cocomo81",
      {attr("SIZE"), attr("DATA"), attr("VIRTMIN"), attr("VIRTMAJ"), attr("TIME"), attr("STOR"),
       attr("TURN"), attr("ACAP"), attr("AEXP"), attr("PCAP"), attr("VEXP"), attr("LEXP"),
       attr("SCED")},
      "EFFORT"};
  return schema;
}

std::map<std::string, DatasetSchema> builtin_schemas() {
  return {{"tukutuku", tukutuku_schema()}, {"cocomo81", cocomo81_schema()}};
}

DatasetSchema parse_schema_json(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(DataErrorKind::BadSchema, std::string("schema file is not valid JSON: ") + e.what());
  }
  try {
    DatasetSchema schema;
    schema.name = j.value("name", std::string("custom"));
    schema.effort_column = j.value("effort", std::string("Effort"));
    for (const auto &a : j.at("attributes")) {
      if (a.is_string()) {
        schema.attributes.push_back(attr(a.get<std::string>()));
        continue;
      }
      AttributeSpec spec;
      spec.name = a.at("name").get<std::string>();
      spec.column = a.value("column", std::string());
      if (a.contains("sets"))
        spec.num_sets = a.at("sets").get<int>();
      schema.attributes.push_back(std::move(spec));
    }
    schema.validate();
    return schema;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(DataErrorKind::BadSchema, std::string("malformed schema: ") + e.what());
  }
}

DatasetSchema resolve_schema(const std::string &name_or_path) {
  auto builtins = builtin_schemas();
  if (auto it = builtins.find(name_or_path); it != builtins.end())
    return it->second;
  std::error_code ec;
  if (std::filesystem::is_regular_file(name_or_path, ec)) {
    std::ifstream in(name_or_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_schema_json(ss.str());
  }
  throw ConfigError("unknown schema '" + name_or_path +
                    "' (expected tukutuku, cocomo81 or a schema file)");
}

std::optional<std::size_t> CsvTable::column(const std::string &name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  return std::nullopt;
}

CsvTable read_csv_table(std::istream &in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (!have_header && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (trim(line).empty())
      continue;
    if (!have_header) {
      table.header = split_csv_line(line);
      have_header = true;
    } else {
      table.rows.push_back(split_csv_line(line));
    }
  }
  if (!have_header)
    throw DataError(DataErrorKind::EmptyFile, "empty file: no header row");
  return table;
}

CsvTable read_csv_table(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError(DataErrorKind::Io, "cannot open '" + path.string() + "'");
  return read_csv_table(in);
}

void write_csv_table(std::ostream &out, const CsvTable &table) {
  auto write_row = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i)
        out << ',';
      out << quote_if_needed(cells[i]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto &row : table.rows)
    write_row(row);
}

std::vector<std::vector<double>> extract_attributes(const CsvTable &table,
                                                    const DatasetSchema &schema) {
  check_missing_columns(table, schema, false);
  std::vector<std::size_t> cols;
  for (const auto &a : schema.attributes)
    cols.push_back(require_column(table, a.column_name()));
  std::vector<std::vector<double>> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<double> values;
    values.reserve(cols.size());
    for (auto c : cols)
      values.push_back(parse_cell(table, r, c));
    out.push_back(std::move(values));
  }
  return out;
}

Dataset load_csv(std::istream &in, const DatasetSchema &schema) {
  schema.validate();
  const CsvTable table = read_csv_table(in);
  check_missing_columns(table, schema, true);
  if (table.rows.empty())
    throw DataError(DataErrorKind::EmptyFile, "empty file: header but no data rows");

  const std::size_t effort_col = require_column(table, schema.effort_column);
  auto attributes = extract_attributes(table, schema);

  Dataset data{schema, {}};
  data.records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double effort = parse_cell(table, r, effort_col);
    if (!(effort > 0.0))
      throw DataError(DataErrorKind::NonPositiveEffort,
                      "non-positive effort " + table.rows[r][effort_col] + " at row " +
                          std::to_string(r + 1));
    data.records.push_back(ProjectRecord{std::move(attributes[r]), effort, r + 1});
  }
  return data;
}

Dataset load_csv(const std::filesystem::path &path, const DatasetSchema &schema) {
  std::ifstream in(path);
  if (!in)
    throw DataError(DataErrorKind::Io, "cannot open '" + path.string() + "'");
  return load_csv(in, schema);
}

void write_csv(std::ostream &out, const Dataset &data) {
  CsvTable table;
  for (const auto &a : data.schema.attributes)
    table.header.push_back(a.column_name());
  table.header.push_back(data.schema.effort_column);
  for (const auto &rec : data.records) {
    std::vector<std::string> row;
    row.reserve(rec.attributes.size() + 1);
    for (double v : rec.attributes)
      row.push_back(format_double(v));
    row.push_back(format_double(rec.effort));
    table.rows.push_back(std::move(row));
  }
  write_csv_table(out, table);
}

void write_csv(const std::filesystem::path &path, const Dataset &data) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError(DataErrorKind::Io, "cannot write '" + path.string() + "'");
  write_csv(out, data);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  if (text.empty())
    return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

SyntheticAttribute synthetic_attribute(const std::string &name, std::size_t num_attributes) {
  static const std::map<std::string, SyntheticAttribute> table{
      // Web projects: team experience lowers effort, size and feature counts raise it.
      {"TeamExp", {1, 10, -0.5, true}},
      {"DevTeam", {1, 8, 0.6, true}},
      {"TotWP", {5, 500, 1.0, true}},
      {"TextPages", {0, 300, 0.5, true}},
      {"TotImg", {0, 800, 0.4, true}},
      {"Anim", {0, 40, 0.2, true}},
      {"AV", {0, 20, 0.2, true}},
      {"TotHigh", {0, 30, 0.6, true}},
      {"TotNHigh", {0, 40, 0.3, true}},
      // COCOMO'81: KDSI plus effort multipliers (higher multiplier, more effort).
      {"SIZE", {2, 1150, 2.5, false}},
      {"DATA", {0.94, 1.16, 0.3, false}},
      {"VIRTMIN", {0.87, 1.15, 0.2, false}},
      {"VIRTMAJ", {0.87, 1.30, 0.3, false}},
      {"TIME", {1.0, 1.66, 0.5, false}},
      {"STOR", {1.0, 1.56, 0.4, false}},
      {"TURN", {0.87, 1.15, 0.2, false}},
      {"ACAP", {0.71, 1.46, 0.5, false}},
      {"AEXP", {0.82, 1.29, 0.3, false}},
      {"PCAP", {0.70, 1.42, 0.5, false}},
      {"VEXP", {0.90, 1.21, 0.2, false}},
      {"LEXP", {0.95, 1.14, 0.1, false}},
      {"SCED", {1.0, 1.23, 0.2, false}},
  };
  if (auto it = table.find(name); it != table.end())
    return it->second;
  return {0.0, 100.0, 1.0 / static_cast<double>(num_attributes), false};
}

double synthetic_effort(const DatasetSchema &schema, std::span<const double> attributes,
                        const EffortModel &model) {
  const std::size_t n = schema.attributes.size();
  double exponent = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto spec = synthetic_attribute(schema.attributes[j].name, n);
    exponent += spec.weight * (attributes[j] - spec.lo) / (spec.hi - spec.lo);
  }
  return model.base * std::exp(exponent);
}

Dataset generate_synthetic(const DatasetSchema &schema, std::size_t n, std::uint64_t seed,
                           const EffortModel &model) {
  schema.validate();
  if (n < 2)
    throw ConfigError("synthetic dataset needs at least 2 records");
  if (!(model.noise >= 0.0 && model.noise < 1.0))
    throw ConfigError("noise amplitude must lie in [0, 1)");
  if (!(model.base > 0.0))
    throw ConfigError("effort base must be positive");

  std::mt19937_64 rng(seed);
  const std::size_t m = schema.attributes.size();
  Dataset data{schema, {}};
  data.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ProjectRecord rec;
    rec.attributes.reserve(m);
    for (const auto &a : schema.attributes) {
      const auto spec = synthetic_attribute(a.name, m);
      double v = spec.lo + (spec.hi - spec.lo) * unit_interval(rng());
      if (spec.integer)
        v = std::round(v);
      rec.attributes.push_back(v);
    }
    const double u = 2.0 * unit_interval(rng()) - 1.0;
    rec.effort = synthetic_effort(schema, rec.attributes, model) * (1.0 + model.noise * u);
    data.records.push_back(std::move(rec));
  }
  return data;
}

} // namespace fid3
