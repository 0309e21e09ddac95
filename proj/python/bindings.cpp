#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fid3/cli.hpp"
#include "fid3/dataset.hpp"
#include "fid3/error.hpp"
#include "fid3/evaluation.hpp"
#include "fid3/inference.hpp"
#include "fid3/model_io.hpp"
#include "fid3/report.hpp"
#include "fid3/tree.hpp"

#include <sstream>

namespace py = pybind11;
using namespace fid3;

namespace {

std::vector<EffortPair> pairs_from(const std::vector<double> &actual,
                                   const std::vector<double> &estimated) {
  if (actual.size() != estimated.size())
    throw ConfigError("actual and estimated must have the same length");
  std::vector<EffortPair> pairs;
  for (std::size_t i = 0; i < actual.size(); ++i)
    pairs.push_back({actual[i], estimated[i]});
  return pairs;
}

Dataset dataset_from_rows(const std::vector<std::vector<double>> &rows,
                          const std::vector<double> &efforts,
                          const std::vector<std::string> &names) {
  if (rows.size() != efforts.size())
    throw ConfigError("rows and efforts must have the same length");
  DatasetSchema schema;
  schema.name = "python";
  for (const auto &n : names)
    schema.attributes.push_back({n, {}, std::nullopt});
  schema.validate();
  Dataset data{schema, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != names.size())
      throw DataError(DataErrorKind::MissingValue, "row width does not match names");
    if (!(efforts[i] > 0.0))
      throw DataError(DataErrorKind::NonPositiveEffort, "non-positive effort");
    data.records.push_back({rows[i], efforts[i], i + 1});
  }
  return data;
}

TrainOptions train_options(TNorm tnorm, double beta, int classes, int sets, bool crisp) {
  TrainOptions o;
  o.induction.tnorm = tnorm;
  o.induction.beta = beta;
  o.induction.num_output_classes = classes;
  o.partitions.default_sets = sets;
  o.crisp = crisp;
  return o;
}

} // namespace

PYBIND11_MODULE(fid3, m) {
  m.doc() = "Fuzzy ID3 decision trees for software effort estimation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::enum_<TNorm>(m, "TNorm")
      .value("Minimum", TNorm::Minimum)
      .value("Product", TNorm::Product);

  m.def("tnorm_apply", &tnorm_apply, py::arg("t"), py::arg("a"), py::arg("b"));

  py::class_<MembershipFunction>(m, "MembershipFunction")
      .def_static("left_shoulder", &MembershipFunction::left_shoulder)
      .def_static("triangle", &MembershipFunction::triangle)
      .def_static("right_shoulder", &MembershipFunction::right_shoulder)
      .def("__call__", &MembershipFunction::operator())
      .def_property_readonly("peak", &MembershipFunction::peak)
      .def_property_readonly("breakpoints", [](const MembershipFunction &mf) {
        auto bp = mf.breakpoints();
        return std::vector<double>(bp.begin(), bp.end());
      });

  py::class_<FuzzyPartition>(m, "FuzzyPartition")
      .def_property_readonly("variable", &FuzzyPartition::variable)
      .def_property_readonly("domain", [](const FuzzyPartition &p) {
        return std::make_pair(p.domain_min(), p.domain_max());
      })
      .def("__len__", &FuzzyPartition::size)
      .def("__getitem__", [](const FuzzyPartition &p, std::size_t l) {
        if (l >= p.size())
          throw py::index_error();
        return p[l];
      })
      .def("memberships", &FuzzyPartition::memberships)
      .def("peaks", &FuzzyPartition::peaks);

  m.def("build_uniform_partition", &build_uniform_partition, py::arg("domain_min"),
        py::arg("domain_max"), py::arg("num_sets"), py::arg("variable") = std::string());
  m.def("fuzzify_output",
        [](const std::vector<double> &efforts, int k) { return fuzzify_output(efforts, k); },
        py::arg("efforts"), py::arg("num_classes"));

  m.def("fuzzy_entropy",
        [](const std::vector<double> &p) { return fuzzy_entropy(p); }, py::arg("proportions"));
  m.def(
      "class_proportions",
      [](const std::vector<std::pair<double, std::vector<double>>> &examples, TNorm t) {
        std::vector<WeightedExample> ex;
        std::size_t k = 0;
        for (std::size_t i = 0; i < examples.size(); ++i) {
          ex.push_back({i, examples[i].first, examples[i].second});
          k = examples[i].second.size();
        }
        return class_proportions(ex, t, k);
      },
      py::arg("examples"), py::arg("tnorm"),
      "examples: list of (node_membership, class_memberships)");

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&dataset_from_rows), py::arg("rows"), py::arg("efforts"), py::arg("names"))
      .def("__len__", &Dataset::size)
      .def_property_readonly("names", [](const Dataset &d) { return d.schema.attribute_names(); })
      .def_property_readonly("schema_name", [](const Dataset &d) { return d.schema.name; })
      .def_property_readonly("efforts", &Dataset::efforts)
      .def_property_readonly("rows", [](const Dataset &d) {
        std::vector<std::vector<double>> rows;
        for (const auto &r : d.records)
          rows.push_back(r.attributes);
        return rows;
      })
      .def("to_csv", [](const Dataset &d) {
        std::ostringstream out;
        write_csv(out, d);
        return out.str();
      });

  m.def(
      "load_csv",
      [](const std::filesystem::path &path, const std::string &schema) {
        return load_csv(path, resolve_schema(schema));
      },
      py::arg("path"), py::arg("schema") = "tukutuku");
  m.def(
      "generate_synthetic",
      [](const std::string &schema, std::size_t n, std::uint64_t seed, double noise, double base) {
        return generate_synthetic(resolve_schema(schema), n, seed, EffortModel{base, noise});
      },
      py::arg("schema") = "tukutuku", py::arg("n") = 53, py::arg("seed") = 0,
      py::arg("noise") = 0.1, py::arg("base") = 100.0);

  py::class_<FiringAssignment>(m, "FiringAssignment")
      .def_readonly("leaf_id", &FiringAssignment::leaf_id)
      .def_readonly("strength", &FiringAssignment::strength);

  py::class_<FuzzyTree>(m, "FuzzyTree")
      .def_property_readonly("node_count", [](const FuzzyTree &t) { return t.nodes.size(); })
      .def_property_readonly("leaf_count", &FuzzyTree::leaf_count)
      .def_property_readonly("depth", &FuzzyTree::depth)
      .def_property_readonly("crisp", [](const FuzzyTree &t) { return t.crisp; })
      .def_property_readonly("variables", [](const FuzzyTree &t) {
        std::vector<std::string> names;
        for (const auto &v : t.variables)
          names.push_back(v.name());
        return names;
      })
      .def("predict", [](const FuzzyTree &t, const std::vector<double> &x) { return predict(t, x); })
      .def("fire", [](const FuzzyTree &t, const std::vector<double> &x) { return fire(t, x); })
      .def("to_json", &serialize_tree)
      .def_static("from_json", &deserialize_tree)
      .def("save", [](const FuzzyTree &t, const std::filesystem::path &p) { save_tree(p, t); },
           py::arg("path"))
      .def_static("load", &load_tree);

  m.def(
      "train",
      [](const Dataset &data, TNorm tnorm, double beta, int classes, int sets, bool crisp) {
        return train(data, train_options(tnorm, beta, classes, sets, crisp));
      },
      py::arg("data"), py::arg("tnorm") = TNorm::Product, py::arg("beta") = 0.0,
      py::arg("classes") = 5, py::arg("sets") = kMaxFuzzySets, py::arg("crisp") = false);

  m.def("mre", &mre, py::arg("actual"), py::arg("estimated"));
  m.def(
      "mmre",
      [](const std::vector<double> &a, const std::vector<double> &e) {
        return mmre(pairs_from(a, e));
      },
      py::arg("actual"), py::arg("estimated"));
  m.def(
      "pred",
      [](const std::vector<double> &a, const std::vector<double> &e, double p) {
        return pred(pairs_from(a, e), p);
      },
      py::arg("actual"), py::arg("estimated"), py::arg("p") = 25.0);
  m.def("mmre_improvement", &mmre_improvement, py::arg("crisp_mmre"), py::arg("fuzzy_mmre"));

  m.def(
      "holdout_split",
      [](std::size_t n, double fraction, std::uint64_t seed) {
        const auto s = holdout_split(n, fraction, seed);
        return std::make_pair(s.train, s.test);
      },
      py::arg("n"), py::arg("train_fraction") = 0.7, py::arg("seed") = 0);

  m.def(
      "run_sweep",
      [](const Dataset &data, std::vector<double> betas, double fraction, std::uint64_t seed,
         int classes, int sets, const std::string &format) {
        SweepOptions opts;
        opts.base = train_options(TNorm::Product, 0.0, classes, sets, false);
        if (!betas.empty())
          opts.betas = std::move(betas);
        return render(run_sweep(data, opts, holdout_split(data, fraction, seed)),
                      parse_format(format));
      },
      py::arg("data"), py::arg("betas") = std::vector<double>{}, py::arg("train_fraction") = 0.7,
      py::arg("seed") = 0, py::arg("classes") = 5, py::arg("sets") = kMaxFuzzySets,
      py::arg("format") = "csv", "Runs the beta x t-norm sweep and returns the rendered table.");

  m.def(
      "compare_models",
      [](const Dataset &data, std::vector<double> betas, double fraction, std::uint64_t seed,
         int classes, int sets, const std::string &format) {
        CompareOptions opts;
        opts.base = train_options(TNorm::Product, 0.0, classes, sets, false);
        if (!betas.empty())
          opts.betas = std::move(betas);
        return render(compare_models(data, opts, holdout_split(data, fraction, seed)),
                      parse_format(format));
      },
      py::arg("data"), py::arg("betas") = std::vector<double>{}, py::arg("train_fraction") = 0.7,
      py::arg("seed") = 0, py::arg("classes") = 5, py::arg("sets") = kMaxFuzzySets,
      py::arg("format") = "csv");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "fid3");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a fid3 command line; returns (exit_code, stdout, stderr).");
}
