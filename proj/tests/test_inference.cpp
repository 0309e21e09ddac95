#include <doctest.h>

#include "test_support.hpp"

#include "fid3/error.hpp"
#include "fid3/inference.hpp"

#include <cmath>
#include <limits>

using namespace fid3;
using doctest::Approx;

namespace {

/// Depth-1 tree over a two-set partition of [0, 1] with the given leaf values.
FuzzyTree two_leaf_tree(double left, double right, TNorm t = TNorm::Product) {
  InductionConfig cfg;
  cfg.tnorm = t;
  cfg.num_output_classes = 2;
  FuzzyTree tree{{"x"},
                 {{0, build_uniform_partition(0, 1, 2, "x")}},
                 build_uniform_partition(left, right, 2),
                 cfg,
                 false,
                 (left + right) / 2,
                 {}};
  tree.nodes.resize(3);
  tree.nodes[0].split_variable = 0;
  tree.nodes[0].children = {1, 2};
  tree.nodes[1].representative_effort = left;
  tree.nodes[1].path = {{0, 0}};
  tree.nodes[2].representative_effort = right;
  tree.nodes[2].path = {{0, 1}};
  return tree;
}

/// Plain crisp descent: pick the highest-membership set (lowest index on ties).
double crisp_descent(const FuzzyTree &tree, const std::vector<double> &x) {
  std::size_t id = 0;
  while (!tree.nodes[id].is_leaf()) {
    const auto &var = tree.variables[*tree.nodes[id].split_variable];
    const double v = x[var.attribute_index];
    std::size_t best = 0;
    for (std::size_t l = 1; l < var.partition.size(); ++l)
      if (var.partition[l](v) > var.partition[best](v))
        best = l;
    id = tree.nodes[id].children[best];
  }
  return tree.nodes[id].representative_effort;
}

std::vector<double> random_input(std::mt19937_64 &rng, const Dataset &data) {
  const auto &rec = data.records[rng() % data.size()];
  std::vector<double> x = rec.attributes;
  for (auto &v : x)
    v *= testing::uniform(rng, 0.5, 1.5);
  return x;
}

} // namespace

TEST_CASE("single-leaf tree") {
  DatasetSchema s;
  s.attributes = {{"x", {}, std::nullopt}};
  Dataset data{s, {{{0.0}, 42.0, 1}, {{5.0}, 42.0, 2}}};
  InductionConfig cfg;
  cfg.num_output_classes = 2;
  const auto tree = grow_fuzzy_tree(data, std::vector<InputVariable>{{0, build_uniform_partition(0, 5, 3, "x")}},
                                    build_uniform_partition(42, 50, 2), cfg);
  REQUIRE(tree.nodes.size() == 1);
  for (double x : {-10.0, 0.0, 2.5, 1e6}) {
    const std::vector<double> in{x};
    CHECK(fire(tree, in) == std::vector<FiringAssignment>{{0, 1.0}});
    CHECK(predict(tree, in) == 42.0);
  }
}

TEST_CASE("depth-1 firing") {
  const auto tree = two_leaf_tree(10, 30);
  CHECK(fire(tree, std::vector<double>{0.0}) == std::vector<FiringAssignment>{{1, 1.0}});
  CHECK(fire(tree, std::vector<double>{-3.0}) == std::vector<FiringAssignment>{{1, 1.0}});
  const auto mid = fire(tree, std::vector<double>{0.5});
  REQUIRE(mid.size() == 2);
  CHECK(mid[0].strength == 0.5);
  CHECK(mid[1].strength == 0.5);
  CHECK(predict(tree, std::vector<double>{0.5}) == 20.0);
  CHECK(predict(tree, std::vector<double>{0.25}) == Approx(15.0));
}

TEST_CASE("missing attribute values are rejected") {
  const auto tree = two_leaf_tree(10, 30);
  const std::vector<double> none;
  try {
    predict(tree, none);
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(e.kind() == DataErrorKind::MissingValue);
  }
  CHECK_THROWS_AS(fire(tree, std::vector<double>{std::numeric_limits<double>::quiet_NaN()}),
                  DataError);
}

TEST_CASE("minimum t-norm firing") {
  const auto tree = two_leaf_tree(10, 30, TNorm::Minimum);
  const auto f = fire(tree, std::vector<double>{0.75});
  REQUIRE(f.size() == 2);
  CHECK(f[0].strength == 0.25);
  CHECK(f[1].strength == 0.75);
  CHECK(predict(tree, std::vector<double>{0.75}) == 25.0);
  CHECK(predict(tree, std::vector<double>{40.0}) == 30.0);
}

TEST_CASE("crisp trees predict by plain descent") {
  const auto data = generate_synthetic(tukutuku_schema(), 40, 8);
  TrainOptions opts;
  opts.crisp = true;
  opts.partitions.default_sets = 3;
  const auto tree = train(data, opts);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    const auto x = random_input(rng, data);
    const auto fired = fire(tree, x);
    REQUIRE(fired.size() == 1);
    CHECK(fired[0].strength == 1.0);
    CHECK(predict(tree, x) == crisp_descent(tree, x));
  }
}

TEST_CASE("property: predictions are convex combinations of leaf values") {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto data = generate_synthetic(seed % 2 ? tukutuku_schema() : cocomo81_schema(), 30, seed);
    for (auto t : {TNorm::Product, TNorm::Minimum}) {
      TrainOptions opts;
      opts.induction.tnorm = t;
      opts.induction.beta = 0.1 * static_cast<double>(seed);
      opts.partitions.default_sets = 2 + static_cast<int>(seed % 6);
      const auto tree = train(data, opts);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto &n : tree.nodes)
        if (n.is_leaf()) {
          lo = std::min(lo, n.representative_effort);
          hi = std::max(hi, n.representative_effort);
        }
      for (int k = 0; k < 100; ++k) {
        const auto x = random_input(rng, data);
        const double y = predict(tree, x);
        CHECK(y >= lo);
        CHECK(y <= hi);
        double sum = 0.0;
        for (const auto &f : fire(tree, x)) {
          CHECK(f.strength > 0.0);
          CHECK(f.strength <= 1.0);
          sum += f.strength;
        }
        if (t == TNorm::Product)
          CHECK(std::abs(sum - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("property: product-tree predictions are continuous") {
  const auto data = generate_synthetic(tukutuku_schema(), 53, 4, {1.0, 0.1});
  TrainOptions opts;
  const auto tree = train(data, opts);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    auto x = random_input(rng, data);
    const double y = predict(tree, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      auto bumped = x;
      bumped[j] += 1e-9;
      CHECK(std::abs(predict(tree, bumped) - y) < 1e-6);
    }
  }
}

TEST_CASE("predict_batch matches predict") {
  const auto data = generate_synthetic(tukutuku_schema(), 20, 2);
  const auto tree = train(data, {});
  std::vector<std::vector<double>> inputs;
  for (const auto &r : data.records)
    inputs.push_back(r.attributes);
  const auto batch = predict_batch(tree, inputs);
  for (std::size_t i = 0; i < inputs.size(); ++i)
    CHECK(batch[i] == predict(tree, inputs[i]));
}
