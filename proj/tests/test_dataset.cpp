#include <doctest.h>

#include "test_support.hpp"

#include "fid3/dataset.hpp"
#include "fid3/error.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace fid3;

namespace {

DatasetSchema small_schema() {
  DatasetSchema s;
  s.name = "small";
  s.attributes = {{"a", {}, std::nullopt}, {"b", {}, std::nullopt}};
  s.effort_column = "Effort";
  return s;
}

DataErrorKind load_error(const std::string &csv, std::string *message = nullptr) {
  std::istringstream in(csv);
  try {
    load_csv(in, small_schema());
  } catch (const DataError &e) {
    if (message)
      *message = e.what();
    return e.kind();
  }
  FAIL("expected a DataError");
  return DataErrorKind::Io;
}

} // namespace

TEST_CASE("load_csv keeps file order") {
  std::istringstream in("a,b,Effort\n1,2,10\n3,4,20\n5,6,30\n");
  const auto data = load_csv(in, small_schema());
  REQUIRE(data.size() == 3);
  CHECK(data.records[0].attributes == std::vector<double>{1, 2});
  CHECK(data.records[2].effort == 30);
  CHECK(data.records[1].source_row == 2);
}

TEST_CASE("load_csv ignores extra columns and accepts reordered headers") {
  std::istringstream in("id,Effort,b,a\nx,10,2,1\ny,20,4,3\n");
  const auto data = load_csv(in, small_schema());
  CHECK(data.records[1].attributes == std::vector<double>{3, 4});
}

TEST_CASE("load_csv error kinds") {
  std::string msg;
  CHECK(load_error("a,b,Effort\n1,2,10\n1,2,-5\n3,4,8\n", &msg) ==
        DataErrorKind::NonPositiveEffort);
  CHECK(msg.find("row 2") != std::string::npos);

  CHECK(load_error("a,Effort\n1,10\n", &msg) == DataErrorKind::MissingColumn);
  CHECK(msg.find("b") != std::string::npos);

  CHECK(load_error("a,b,Effort\n1,2,10\n1,xyz,10\n", &msg) == DataErrorKind::NonNumeric);
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("'b'") != std::string::npos);

  CHECK(load_error("") == DataErrorKind::EmptyFile);
  CHECK(load_error("a,b,Effort\n") == DataErrorKind::EmptyFile);
  CHECK(load_error("a,b,Effort\n1,,10\n") == DataErrorKind::MissingValue);
  CHECK(load_error("a,b,Effort\n1,2\n") == DataErrorKind::MissingValue);
  CHECK(load_error("a,b,Effort\n1,nan,10\n") == DataErrorKind::NonNumeric);
}

TEST_CASE("load_csv from a missing path is an io error") {
  try {
    load_csv(std::filesystem::path("/nonexistent/file.csv"), small_schema());
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(e.kind() == DataErrorKind::Io);
  }
}

TEST_CASE("builtin schemas") {
  CHECK(tukutuku_schema().attributes.size() == 9);
  CHECK(cocomo81_schema().attributes.size() == 13);
  const auto t = tukutuku_schema().attribute_names();
  const auto c = cocomo81_schema().attribute_names();
  std::set<std::string> all(t.begin(), t.end());
  all.insert(c.begin(), c.end());
  CHECK(all.size() == 22);
  CHECK(builtin_schemas().size() == 2);
  CHECK(resolve_schema("cocomo81").name == "cocomo81");
  CHECK_THROWS_AS(resolve_schema("nasa93"), ConfigError);
}

TEST_CASE("schema json with column mapping and set counts") {
  const auto s = parse_schema_json(R"({"name": "web", "effort": "hours",
    "attributes": ["TotWP", {"name": "TeamExp", "column": "team_exp", "sets": 3}]})");
  CHECK(s.name == "web");
  CHECK(s.effort_column == "hours");
  REQUIRE(s.attributes.size() == 2);
  CHECK(s.attributes[1].column_name() == "team_exp");
  CHECK(s.attributes[1].num_sets == 3);

  std::istringstream in("TotWP,team_exp,hours\n10,2,5\n");
  const auto data = load_csv(in, s);
  CHECK(data.records[0].attributes == std::vector<double>{10, 2});

  CHECK_THROWS_AS(parse_schema_json(R"({"attributes": ["a", "a"]})"), DataError);
  CHECK_THROWS_AS(parse_schema_json(R"({"attributes": ["Effort"]})"), DataError);
  CHECK_THROWS_AS(parse_schema_json(R"({"attributes": [{"name": "a", "sets": 9}]})"), DataError);
  CHECK_THROWS_AS(parse_schema_json("not json"), DataError);
}

TEST_CASE("synthetic generator is deterministic and valid") {
  const auto a = generate_synthetic(tukutuku_schema(), 53, 11);
  const auto b = generate_synthetic(tukutuku_schema(), 53, 11);
  const auto c = generate_synthetic(tukutuku_schema(), 53, 12);
  REQUIRE(a.size() == 53);
  CHECK(a.records == b.records);
  CHECK_FALSE(a.records == c.records);
  for (const auto &r : a.records) {
    CHECK(r.effort > 0.0);
    CHECK(r.attributes.size() == 9);
    for (double v : r.attributes)
      CHECK(std::isfinite(v));
  }
  CHECK_THROWS_AS(generate_synthetic(tukutuku_schema(), 1, 0), ConfigError);
  CHECK_THROWS_AS(generate_synthetic(tukutuku_schema(), 10, 0, {100.0, 1.0}), ConfigError);
}

TEST_CASE("synthetic effort without noise follows the documented model") {
  // Documented Tukutuku ranges and weights, restated here independently.
  struct Spec {
    double lo, hi, w;
  };
  const Spec specs[] = {{1, 10, -0.5}, {1, 8, 0.6},  {5, 500, 1.0}, {0, 300, 0.5}, {0, 800, 0.4},
                        {0, 40, 0.2},  {0, 20, 0.2}, {0, 30, 0.6},  {0, 40, 0.3}};
  const auto data = generate_synthetic(tukutuku_schema(), 40, 5, {250.0, 0.0});
  for (const auto &r : data.records) {
    double s = 0.0;
    for (int j = 0; j < 9; ++j) {
      CHECK(r.attributes[j] == std::round(r.attributes[j]));
      CHECK(r.attributes[j] >= specs[j].lo);
      CHECK(r.attributes[j] <= specs[j].hi);
      s += specs[j].w * (r.attributes[j] - specs[j].lo) / (specs[j].hi - specs[j].lo);
    }
    CHECK(r.effort == doctest::Approx(250.0 * std::exp(s)).epsilon(1e-12));
  }
}

TEST_CASE("property: write_csv and load_csv round-trip exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto &schema = seed % 2 ? tukutuku_schema() : cocomo81_schema();
    const auto data = generate_synthetic(schema, 2 + seed * 3, seed, {100.0, 0.5});
    std::ostringstream out;
    write_csv(out, data);
    std::istringstream in(out.str());
    const auto back = load_csv(in, schema);
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(back.records[i].attributes == data.records[i].attributes);
      CHECK(back.records[i].effort == data.records[i].effort);
    }
    std::ostringstream again;
    write_csv(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("csv quoting") {
  CsvTable t{{"name", "v"}, {{"a,b", "1"}, {"say \"hi\"", "2"}}};
  std::ostringstream out;
  write_csv_table(out, t);
  std::istringstream in(out.str());
  const auto back = read_csv_table(in);
  CHECK(back.rows == t.rows);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123, -2.5})
    CHECK(parse_double(format_double(v)) == v);
  CHECK_FALSE(parse_double("1.5x").has_value());
  CHECK_FALSE(parse_double("").has_value());
  CHECK(parse_double("+2") == 2.0);
}
