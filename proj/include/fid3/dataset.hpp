#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fid3 {

/// One historical project: cost-driver values in schema order plus actual effort.
struct ProjectRecord {
  std::vector<double> attributes;
  double effort = 0.0;
  /// 1-based data row in the source file (0 for generated records).
  std::size_t source_row = 0;

  bool operator==(const ProjectRecord &) const = default;
};

struct AttributeSpec {
  std::string name;
  /// CSV header to read the attribute from; empty means same as name.
  std::string column;
  /// Fuzzy-set count override for this variable.
  std::optional<int> num_sets;

  const std::string &column_name() const { return column.empty() ? name : column; }
};

struct DatasetSchema {
  std::string name;
  std::vector<AttributeSpec> attributes;
  std::string effort_column = "Effort";

  std::vector<std::string> attribute_names() const;
  /// Throws DataError(BadSchema) on duplicate names or an effort column that
  /// collides with an attribute.
  void validate() const;
};

struct Dataset {
  DatasetSchema schema;
  std::vector<ProjectRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  std::vector<double> efforts() const;
  /// Records at the given positions, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;
};

/// The Tukutuku-shaped (9 attributes) and COCOMO'81-shaped (13 attributes) schemas.
const DatasetSchema &tukutuku_schema();
const DatasetSchema &cocomo81_schema();
std::map<std::string, DatasetSchema> builtin_schemas();

/// Builtin schema by name, or a JSON schema file when `name_or_path` names
/// an existing file. Throws ConfigError for unknown names.
DatasetSchema resolve_schema(const std::string &name_or_path);
DatasetSchema parse_schema_json(const std::string &text);

/// Raw comma-separated table: header plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string &name) const;
};

CsvTable read_csv_table(std::istream &in);
CsvTable read_csv_table(const std::filesystem::path &path);
void write_csv_table(std::ostream &out, const CsvTable &table);

/// Parses and validates rows against the schema. Extra columns are ignored.
/// Throws DataError with a distinct kind for each failure.
Dataset load_csv(std::istream &in, const DatasetSchema &schema);
Dataset load_csv(const std::filesystem::path &path, const DatasetSchema &schema);

/// Attribute values of each row in schema order, without requiring an effort
/// column (prediction input).
std::vector<std::vector<double>> extract_attributes(const CsvTable &table,
                                                    const DatasetSchema &schema);

/// Header is the schema's attribute columns followed by the effort column.
void write_csv(std::ostream &out, const Dataset &data);
void write_csv(const std::filesystem::path &path, const Dataset &data);

/// Shortest decimal rendering that parses back to the same double.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view text);

/// Parameters of the synthetic effort model.
///
/// Each attribute j is drawn uniformly from its range [lo_j, hi_j] (rounded
/// for count-valued attributes) and normalised to z_j in [0,1]. The clean
/// effort is base * exp(sum_j w_j * z_j), and the recorded effort is
/// clean * (1 + noise * u) with u uniform in [-1, 1).
struct EffortModel {
  double base = 100.0;
  double noise = 0.1;
};

struct SyntheticAttribute {
  double lo;
  double hi;
  double weight;
  bool integer;
};

/// Ranges and weights used by generate_synthetic for a schema attribute.
/// Unknown names get [0, 100], weight 1/n, real-valued.
SyntheticAttribute synthetic_attribute(const std::string &name, std::size_t num_attributes);

/// Noise-free effort for an attribute vector under `model`.
double synthetic_effort(const DatasetSchema &schema, std::span<const double> attributes,
                        const EffortModel &model);

/// Seeded, platform-independent generator (std::mt19937_64 core with explicit
/// bit-to-double mapping). Throws ConfigError when n < 2 or noise is outside [0, 1).
Dataset generate_synthetic(const DatasetSchema &schema, std::size_t n, std::uint64_t seed,
                           const EffortModel &model = {});

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
double unit_interval(std::uint64_t bits) noexcept;

} // namespace fid3
