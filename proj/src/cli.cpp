#include "fid3/cli.hpp"

#include "fid3/dataset.hpp"
#include "fid3/error.hpp"
#include "fid3/evaluation.hpp"
#include "fid3/inference.hpp"
#include "fid3/model_io.hpp"
#include "fid3/report.hpp"
#include "fid3/tree.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fid3 {

namespace {

struct GlobalOptions {
  std::string schema = "tukutuku";
  std::string tnorm = "product";
  std::string beta;
  int classes = 5;
  std::string sets = "7";
  double split = 0.7;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string out;
};

struct CommandOptions {
  std::string data;
  std::string model;
  std::size_t count = 53;
  double noise = 0.1;
  double base = 100.0;
  bool crisp = false;
  bool train_metrics = false;
};

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

std::vector<double> parse_betas(const std::string &text) {
  if (text.empty())
    return default_beta_grid();
  std::vector<double> betas;
  for (const auto &item : split_list(text)) {
    auto v = parse_double(item);
    if (!v)
      throw ConfigError("invalid beta value '" + item + "'");
    if (!(*v >= 0.0 && *v <= 1.0))
      throw ConfigError("significance level beta must lie in [0,1], got " + item);
    betas.push_back(*v);
  }
  if (betas.empty())
    throw ConfigError("empty beta list");
  return betas;
}

int parse_set_count(const std::string &text) {
  auto v = parse_double(text);
  if (!v || *v != static_cast<int>(*v) || *v < kMinFuzzySets || *v > kMaxFuzzySets)
    throw ConfigError("fuzzy-set count must be an integer between 2 and 7, got '" + text + "'");
  return static_cast<int>(*v);
}

/// "7", "TotWP=3" or a comma list mixing both.
PartitionOptions parse_sets(const std::string &text, const DatasetSchema &schema) {
  PartitionOptions opts;
  for (const auto &item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      opts.default_sets = parse_set_count(item);
      continue;
    }
    const std::string name = item.substr(0, eq);
    bool known = false;
    for (const auto &a : schema.attributes)
      known = known || a.name == name;
    if (!known)
      throw ConfigError("--sets names unknown attribute '" + name + "'");
    opts.overrides.emplace_back(name, parse_set_count(item.substr(eq + 1)));
  }
  return opts;
}

struct Resolved {
  DatasetSchema schema;
  TNorm tnorm;
  std::vector<double> betas;
  PartitionOptions partitions;
  ReportFormat format;

  TrainOptions train_options(int classes, bool crisp) const {
    TrainOptions o;
    o.induction.tnorm = tnorm;
    o.induction.beta = betas.front();
    o.induction.num_output_classes = classes;
    o.partitions = partitions;
    o.crisp = crisp;
    return o;
  }
};

Resolved resolve(const GlobalOptions &g, bool single_beta) {
  if (g.classes < kMinFuzzySets || g.classes > kMaxFuzzySets)
    throw ConfigError("--classes must be between 2 and 7");
  if (!(g.split > 0.0 && g.split < 1.0))
    throw ConfigError("--split must lie strictly between 0 and 1");
  Resolved r{resolve_schema(g.schema), parse_tnorm(g.tnorm), {}, {}, parse_format(g.format)};
  r.betas = single_beta && g.beta.empty() ? std::vector<double>{0.0} : parse_betas(g.beta);
  if (single_beta && r.betas.size() != 1)
    throw ConfigError("this command takes a single --beta value");
  r.partitions = parse_sets(g.sets, r.schema);
  return r;
}

void require(const std::string &value, const char *flag) {
  if (value.empty())
    throw ConfigError(std::string("missing required option ") + flag);
}

void emit(const std::string &path, const std::string &content, std::ostream &out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw DataError(DataErrorKind::Io, "cannot write '" + path + "'");
  f << content;
}

void check_model_schema(const FuzzyTree &tree, const DatasetSchema &schema) {
  if (tree.attribute_names != schema.attribute_names())
    throw ConfigError("model was trained on different attributes than schema '" + schema.name +
                      "' (pass the matching --schema)");
}

int cmd_generate(const GlobalOptions &g, const CommandOptions &c, std::ostream &out) {
  const auto schema = resolve_schema(g.schema);
  if (c.count < 2)
    throw ConfigError("--count must be at least 2");
  const Dataset data = generate_synthetic(schema, c.count, g.seed, EffortModel{c.base, c.noise});
  std::ostringstream csv;
  write_csv(csv, data);
  emit(g.out, csv.str(), out);
  return kExitOk;
}

int cmd_train(const GlobalOptions &g, const CommandOptions &c, std::ostream &out) {
  const Resolved r = resolve(g, true);
  require(c.data, "--data");
  require(g.out, "--out");
  const Dataset data = load_csv(c.data, r.schema);
  const FuzzyTree tree = train(data, r.train_options(g.classes, c.crisp));
  save_tree(g.out, tree);

  out << "model: " << (tree.crisp ? "crisp ID3" : "fuzzy ID3") << " tnorm=" << to_string(tree.config.tnorm)
      << " beta=" << format_double(tree.config.beta) << '\n';
  out << "nodes: " << tree.nodes.size() << "  leaves: " << tree.leaf_count()
      << "  depth: " << tree.depth() << "  empty leaves: " << tree.empty_leaf_count()
      << "  negative-gain splits: " << tree.negative_gain_splits() << '\n';
  out << "variable usage:";
  const auto usage = tree.variable_usage();
  for (std::size_t v = 0; v < tree.variables.size(); ++v)
    out << ' ' << tree.variables[v].name() << '=' << usage[v];
  out << '\n';
  return kExitOk;
}

int cmd_predict(const GlobalOptions &g, const CommandOptions &c, std::ostream &out) {
  const auto schema = resolve_schema(g.schema);
  require(c.model, "--model");
  require(c.data, "--data");
  const FuzzyTree tree = load_tree(c.model);
  check_model_schema(tree, schema);
  CsvTable table = read_csv_table(std::filesystem::path(c.data));
  const auto inputs = extract_attributes(table, schema);
  const auto predictions = predict_batch(tree, inputs);
  table.header.push_back("predicted_effort");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    table.rows[i].resize(table.header.size() - 1);
    table.rows[i].push_back(format_double(predictions[i]));
  }
  std::ostringstream csv;
  write_csv_table(csv, table);
  emit(g.out, csv.str(), out);
  return kExitOk;
}

int cmd_evaluate(const GlobalOptions &g, const CommandOptions &c, std::ostream &out) {
  const Resolved r = resolve(g, true);
  require(c.data, "--data");
  const Dataset data = load_csv(c.data, r.schema);

  if (!c.model.empty()) {
    const FuzzyTree tree = load_tree(c.model);
    check_model_schema(tree, r.schema);
    const RunDescriptor desc{tree.crisp ? "crisp" : "fuzzy", tree.config.tnorm, tree.config.beta,
                             "full dataset", g.seed};
    emit(g.out, render(evaluate(tree, data, {}, desc), r.format), out);
    return kExitOk;
  }

  const HoldoutSplit split = holdout_split(data, g.split, g.seed);
  const FuzzyTree tree = train(data.subset(split.train), r.train_options(g.classes, c.crisp));
  const RunDescriptor desc{c.crisp ? "crisp" : "fuzzy", r.tnorm, r.betas.front(),
                           split.descriptor(), g.seed};
  const auto test = evaluate(tree, data, split.test, desc);
  if (!c.train_metrics) {
    emit(g.out, render(test, r.format), out);
    return kExitOk;
  }
  auto training_desc = desc;
  training_desc.split += " [training set]";
  const auto training = evaluate(tree, data, split.train, training_desc);
  if (r.format == ReportFormat::Json) {
    auto j = nlohmann::ordered_json::object();
    j["test"] = nlohmann::ordered_json::parse(render(test, r.format));
    j["training"] = nlohmann::ordered_json::parse(render(training, r.format));
    emit(g.out, j.dump(1) + "\n", out);
  } else {
    emit(g.out, render(test, r.format) + "\n" + render(training, r.format), out);
  }
  return kExitOk;
}

int cmd_sweep(const GlobalOptions &g, const CommandOptions &c, std::ostream &out) {
  const Resolved r = resolve(g, false);
  require(c.data, "--data");
  const Dataset data = load_csv(c.data, r.schema);
  const HoldoutSplit split = holdout_split(data, g.split, g.seed);
  SweepOptions opts;
  opts.base = r.train_options(g.classes, false);
  opts.betas = r.betas;
  opts.report_training = c.train_metrics;
  emit(g.out, render(run_sweep(data, opts, split), r.format), out);
  return kExitOk;
}

int cmd_compare(const GlobalOptions &g, const CommandOptions &c, std::ostream &out) {
  const Resolved r = resolve(g, false);
  require(c.data, "--data");
  const Dataset data = load_csv(c.data, r.schema);
  const HoldoutSplit split = holdout_split(data, g.split, g.seed);
  CompareOptions opts;
  opts.base = r.train_options(g.classes, false);
  opts.betas = r.betas;
  emit(g.out, render(compare_models(data, opts, split), r.format), out);
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  GlobalOptions g;
  CommandOptions c;

  CLI::App app{"Fuzzy ID3 decision trees for software effort estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--schema", g.schema, "Builtin schema (tukutuku, cocomo81) or JSON schema file")
      ->capture_default_str();
  app.add_option("--tnorm", g.tnorm, "Conjunction operator: min or product")->capture_default_str();
  app.add_option("--beta", g.beta,
                 "Significance level; comma list for sweep/compare (default 0.1,...,0.9; 0 for "
                 "single-model commands)");
  app.add_option("--classes", g.classes, "Number of output effort classes (2-7)")
      ->capture_default_str();
  app.add_option("--sets", g.sets, "Fuzzy sets per variable: N and/or NAME=N, comma separated")
      ->capture_default_str();
  app.add_option("--split", g.split, "Training fraction of the holdout split")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for generation and splitting")->capture_default_str();
  app.add_option("--format", g.format, "Report format: text, csv or json")->capture_default_str();
  app.add_option("--out", g.out, "Output file (stdout when omitted)");

  auto *gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  gen->add_option("-n,--count", c.count, "Number of projects")->capture_default_str();
  gen->add_option("--noise", c.noise, "Relative noise amplitude in [0,1)")->capture_default_str();
  gen->add_option("--base", c.base, "Effort scale")->capture_default_str();

  auto *tr = app.add_subcommand("train", "Grow a tree on a dataset and save it");
  tr->add_option("--data", c.data, "Training CSV");
  tr->add_flag("--crisp", c.crisp, "Grow the crisp ID3 baseline instead");

  auto *pr = app.add_subcommand("predict", "Append predicted_effort to a CSV");
  pr->add_option("--model", c.model, "Model file");
  pr->add_option("--data", c.data, "Input CSV");

  auto *ev = app.add_subcommand("evaluate", "MMRE and Pred(25) of a model or a holdout run");
  ev->add_option("--model", c.model, "Model file (evaluates on the whole dataset)");
  ev->add_option("--data", c.data, "Dataset CSV");
  ev->add_flag("--crisp", c.crisp, "Use the crisp ID3 baseline for the holdout run");
  ev->add_flag("--train-metrics", c.train_metrics, "Also report training-set accuracy");

  auto *sw = app.add_subcommand("sweep", "Accuracy over the beta grid for both t-norms");
  sw->add_option("--data", c.data, "Dataset CSV");
  sw->add_flag("--train-metrics", c.train_metrics, "Also score each cell on its training set");

  auto *cmp = app.add_subcommand("compare", "Crisp ID3 vs Model 1 vs Model 2");
  cmp->add_option("--data", c.data, "Dataset CSV");

  std::vector<const char *> argv;
  argv.reserve(args.size());
  for (const auto &a : args)
    argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    err << "error[usage]: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(g, c, out);
    if (tr->parsed())
      return cmd_train(g, c, out);
    if (pr->parsed())
      return cmd_predict(g, c, out);
    if (ev->parsed())
      return cmd_evaluate(g, c, out);
    if (sw->parsed())
      return cmd_sweep(g, c, out);
    if (cmp->parsed())
      return cmd_compare(g, c, out);
  } catch (const ConfigError &e) {
    err << "error[config]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError &e) {
    err << "error[data:" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    err << "error[internal]: " << e.what() << '\n';
    return kExitInternal;
  }
  err << "error[usage]: no command given\n";
  return kExitUsage;
}

} // namespace fid3
