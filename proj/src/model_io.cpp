#include "fid3/model_io.hpp"

#include "fid3/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fid3 {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char *kFormat = "fid3-tree";
constexpr int kVersion = 1;

const char *kind_name(MembershipFunction::Kind k) {
  switch (k) {
  case MembershipFunction::Kind::LeftShoulder: return "left-shoulder";
  case MembershipFunction::Kind::Triangle: return "triangle";
  case MembershipFunction::Kind::RightShoulder: return "right-shoulder";
  }
  return "?";
}

ojson partition_to_json(const FuzzyPartition &p) {
  ojson sets = ojson::array();
  for (const auto &mf : p.sets()) {
    ojson bp = ojson::array();
    for (double b : mf.breakpoints())
      bp.push_back(b);
    sets.push_back(ojson{{"kind", kind_name(mf.kind())}, {"breakpoints", bp}});
  }
  return ojson{{"variable", p.variable()},
               {"domain", {p.domain_min(), p.domain_max()}},
               {"sets", sets}};
}

FuzzyPartition partition_from_json(const ojson &j) {
  std::vector<MembershipFunction> sets;
  for (const auto &s : j.at("sets")) {
    const auto kind = s.at("kind").get<std::string>();
    const auto bp = s.at("breakpoints").get<std::vector<double>>();
    if (kind == "left-shoulder" && bp.size() == 2)
      sets.push_back(MembershipFunction::left_shoulder(bp[0], bp[1]));
    else if (kind == "triangle" && bp.size() == 3)
      sets.push_back(MembershipFunction::triangle(bp[0], bp[1], bp[2]));
    else if (kind == "right-shoulder" && bp.size() == 2)
      sets.push_back(MembershipFunction::right_shoulder(bp[0], bp[1]));
    else
      throw DataError(DataErrorKind::BadModel, "bad membership function '" + kind + "'");
  }
  const auto &domain = j.at("domain");
  return FuzzyPartition(j.at("variable").get<std::string>(), domain.at(0).get<double>(),
                        domain.at(1).get<double>(), std::move(sets));
}

} // namespace

std::string serialize_tree(const FuzzyTree &tree) {
  ojson j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["crisp"] = tree.crisp;
  j["tnorm"] = std::string(to_string(tree.config.tnorm));
  j["beta"] = tree.config.beta;
  j["min_node_weight"] = tree.config.min_node_weight;
  j["num_output_classes"] = tree.config.num_output_classes;
  j["attributes"] = tree.attribute_names;
  j["fallback_effort"] = tree.fallback_effort;
  j["output_partition"] = partition_to_json(tree.output_partition);

  ojson vars = ojson::array();
  for (const auto &v : tree.variables)
    vars.push_back(ojson{{"attribute_index", v.attribute_index},
                         {"partition", partition_to_json(v.partition)}});
  j["variables"] = vars;

  ojson nodes = ojson::array();
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const auto &n = tree.nodes[id];
    ojson node;
    node["id"] = id;
    node["split"] = n.split_variable ? ojson(*n.split_variable) : ojson(nullptr);
    node["children"] = n.children;
    node["gain"] = n.gain;
    node["representative_effort"] = n.representative_effort;
    node["retained"] = n.stats.retained;
    node["total_weight"] = n.stats.total_weight;
    node["entropy"] = n.stats.entropy;
    node["empty"] = n.stats.empty;
    node["proportions"] = n.stats.proportions;
    nodes.push_back(std::move(node));
  }
  j["nodes"] = nodes;
  return j.dump(1) + "\n";
}

FuzzyTree deserialize_tree(const std::string &text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(DataErrorKind::BadModel, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kVersion)
      throw DataError(DataErrorKind::BadModel, "unsupported model format");

    InductionConfig cfg;
    cfg.tnorm = parse_tnorm(j.at("tnorm").get<std::string>());
    cfg.beta = j.at("beta").get<double>();
    cfg.min_node_weight = j.at("min_node_weight").get<double>();
    cfg.num_output_classes = j.at("num_output_classes").get<int>();

    std::vector<InputVariable> vars;
    for (const auto &v : j.at("variables"))
      vars.push_back({v.at("attribute_index").get<std::size_t>(),
                      partition_from_json(v.at("partition"))});

    FuzzyTree tree{j.at("attributes").get<std::vector<std::string>>(),
                   std::move(vars),
                   partition_from_json(j.at("output_partition")),
                   cfg,
                   j.at("crisp").get<bool>(),
                   j.at("fallback_effort").get<double>(),
                   {}};

    const auto &nodes = j.at("nodes");
    tree.nodes.resize(nodes.size());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const auto &jn = nodes[id];
      if (jn.at("id").get<std::size_t>() != id)
        throw DataError(DataErrorKind::BadModel, "nodes must be listed in id order");
      auto &n = tree.nodes[id];
      if (!jn.at("split").is_null())
        n.split_variable = jn.at("split").get<std::size_t>();
      n.children = jn.at("children").get<std::vector<std::size_t>>();
      n.gain = jn.at("gain").get<double>();
      n.representative_effort = jn.at("representative_effort").get<double>();
      n.stats.retained = jn.at("retained").get<std::size_t>();
      n.stats.total_weight = jn.at("total_weight").get<double>();
      n.stats.entropy = jn.at("entropy").get<double>();
      n.stats.empty = jn.at("empty").get<bool>();
      n.stats.proportions = jn.at("proportions").get<std::vector<double>>();
    }

    // Rebuild paths; children always come after their parent.
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      const auto &n = tree.nodes[id];
      if (n.is_leaf()) {
        if (!n.children.empty())
          throw DataError(DataErrorKind::BadModel, "leaf with children");
        continue;
      }
      const std::size_t v = *n.split_variable;
      if (v >= tree.variables.size() || n.children.size() != tree.variables[v].partition.size())
        throw DataError(DataErrorKind::BadModel, "split does not match its partition");
      for (std::size_t l = 0; l < n.children.size(); ++l) {
        const std::size_t c = n.children[l];
        if (c <= id || c >= tree.nodes.size())
          throw DataError(DataErrorKind::BadModel, "child id out of order");
        tree.nodes[c].path = n.path;
        tree.nodes[c].path.push_back({v, l});
      }
    }
    if (tree.nodes.empty())
      throw DataError(DataErrorKind::BadModel, "model has no nodes");
    return tree;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(DataErrorKind::BadModel, std::string("malformed model: ") + e.what());
  } catch (const ConfigError &e) {
    throw DataError(DataErrorKind::BadModel, std::string("malformed model: ") + e.what());
  }
}

void save_tree(const std::filesystem::path &path, const FuzzyTree &tree) {
  const std::string text = serialize_tree(tree);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError(DataErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
}

FuzzyTree load_tree(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError(DataErrorKind::Io, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_tree(ss.str());
}

} // namespace fid3
