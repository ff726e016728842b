#include "netbandit/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace netbandit {
namespace {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

const json& require(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end())
    fail(std::string(where) + " is missing required key \"" + key + "\"");
  return *it;
}

MappingVariant parse_mapping_variant(const std::string& name) {
  if (name == "per_unit") return MappingVariant::PerUnitArm;
  if (name == "global_proportion") return MappingVariant::GlobalProportion;
  if (name == "neighborhood_threshold")
    return MappingVariant::NeighborhoodThreshold;
  if (name == "cluster_proportion") return MappingVariant::ClusterProportion;
  fail("unknown mapping variant \"" + name + "\"");
}

ExposureMapSpec parse_mapping(const json& node) {
  if (!node.is_object()) fail("\"mapping\" must be an object");
  ExposureMapSpec spec;
  spec.variant =
      parse_mapping_variant(require(node, "variant", "mapping").get<std::string>());
  if (node.contains("threshold")) spec.threshold = node["threshold"].get<double>();
  if (node.contains("restrict_labels")) {
    spec.restrict_labels = node["restrict_labels"].get<std::vector<double>>();
    if (spec.restrict_labels->empty())
      fail("\"restrict_labels\" must be non-empty when present");
  }
  return spec;
}

OutcomeSpec parse_outcome(const json& node) {
  if (!node.is_object()) fail("\"instance.outcome\" must be an object");
  OutcomeSpec spec;
  const std::string variant =
      require(node, "variant", "outcome").get<std::string>();
  if (variant == "needle") {
    spec.variant = OutcomeVariant::NeedleInstance;
    spec.gap = require(node, "gap", "needle outcome").get<double>();
    spec.target =
        require(node, "target", "needle outcome").get<std::vector<int>>();
  } else if (variant == "exposure_faithful") {
    spec.variant = OutcomeVariant::ExposureFaithful;
    const json& means = require(node, "means", "exposure_faithful outcome");
    if (!means.is_array()) fail("\"means\" must be an array");
    for (const json& row : means) {
      OutcomeSpec::FaithfulEntry e;
      e.unit = require(row, "unit", "means entry").get<std::size_t>();
      e.label = require(row, "label", "means entry").get<double>();
      e.mean = require(row, "mean", "means entry").get<double>();
      spec.faithful_entries.push_back(e);
    }
  } else if (variant == "dense_table") {
    spec.variant = OutcomeVariant::DenseTable;
    const json& entries = require(node, "entries", "dense_table outcome");
    if (!entries.is_array()) fail("\"entries\" must be an array");
    for (const json& row : entries) {
      OutcomeSpec::TableEntry e;
      e.arm = require(row, "arm", "table entry").get<std::vector<int>>();
      e.means = require(row, "means", "table entry").get<std::vector<double>>();
      spec.table_entries.push_back(std::move(e));
    }
  } else {
    fail("unknown outcome variant \"" + variant + "\"");
  }
  return spec;
}

NoiseModel parse_noise(const json& node) {
  NoiseModel noise;
  if (node.is_null()) return noise;
  if (!node.is_object()) fail("\"instance.noise\" must be an object");
  const std::string variant =
      require(node, "variant", "noise").get<std::string>();
  if (variant == "gaussian") {
    noise.variant = NoiseVariant::Gaussian;
    if (node.contains("sigma")) noise.sigma = node["sigma"].get<double>();
  } else if (variant == "bounded_bernoulli") {
    noise.variant = NoiseVariant::BoundedBernoulli;
  } else if (variant == "rademacher") {
    noise.variant = NoiseVariant::Rademacher;
  } else {
    fail("unknown noise variant \"" + variant + "\"");
  }
  return noise;
}

DriftSchedule parse_drift(const json& node) {
  DriftSchedule drift;
  if (node.is_null()) return drift;
  if (!node.is_object()) fail("\"instance.drift\" must be an object");
  const std::string variant =
      require(node, "variant", "drift").get<std::string>();
  if (variant == "none") {
    drift.variant = DriftVariant::None;
  } else if (variant == "constant") {
    drift.variant = DriftVariant::Constant;
    drift.value = require(node, "value", "constant drift").get<double>();
  } else if (variant == "sinusoidal") {
    drift.variant = DriftVariant::Sinusoidal;
    drift.amplitude =
        require(node, "amplitude", "sinusoidal drift").get<double>();
    drift.period = require(node, "period", "sinusoidal drift").get<double>();
    if (!(drift.period > 0)) fail("sinusoidal drift period must be positive");
  } else if (variant == "table") {
    drift.variant = DriftVariant::Table;
    drift.values =
        require(node, "values", "table drift").get<std::vector<double>>();
    if (drift.values.empty()) fail("table drift needs at least one value");
  } else {
    fail("unknown drift variant \"" + variant + "\"");
  }
  return drift;
}

PolicySpec parse_policy(const json& node) {
  if (!node.is_object()) fail("\"policy\" must be an object");
  PolicySpec spec;
  spec.name = parse_policy_name(require(node, "name", "policy").get<std::string>());
  spec.horizon = require(node, "T", "policy").get<std::int64_t>();
  if (node.contains("T1")) spec.t1 = node["T1"].get<std::int64_t>();
  if (node.contains("delta")) spec.delta = node["delta"].get<double>();
  if (node.contains("bonus_c")) spec.bonus_c = node["bonus_c"].get<double>();
  if (node.contains("epsilon")) spec.epsilon = node["epsilon"].get<double>();
  // "alpha" is accepted but has no effect on the adaptive-weights policy.
  return spec;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("top level must be an object");

  ExperimentConfig cfg;
  cfg.config_hash = fnv1a64(text);
  if (root.contains("config_id"))
    cfg.config_id = root["config_id"].get<std::string>();
  cfg.k = require(root, "k", "config").get<int>();
  if (cfg.k < 2) fail("\"k\" must be at least 2");

  // Unit count can come from n, the network, or the clustering; all present
  // sources must agree.
  std::size_t n = 0;
  auto take_n = [&](std::size_t candidate, const char* source) {
    if (candidate == 0) fail(std::string(source) + " gives zero units");
    if (n == 0) {
      n = candidate;
    } else if (n != candidate) {
      fail(std::string("unit count from ") + source + " (" +
           std::to_string(candidate) + ") disagrees with " +
           std::to_string(n));
    }
  };
  if (root.contains("n")) take_n(root["n"].get<std::size_t>(), "\"n\"");

  bool have_network = false;
  if (root.contains("network_file")) {
    cfg.network = load_network_file(root["network_file"].get<std::string>());
    have_network = true;
  } else if (root.contains("network")) {
    cfg.network = parse_network_json(root["network"].dump());
    have_network = true;
  }
  if (have_network) take_n(cfg.network.size(), "the network");

  bool have_clustering = false;
  if (root.contains("clustering_file")) {
    cfg.clustering =
        load_clustering_file(root["clustering_file"].get<std::string>());
    have_clustering = true;
  } else if (root.contains("clustering")) {
    cfg.clustering = parse_clustering_json(root["clustering"].dump());
    have_clustering = true;
  }
  if (have_clustering) take_n(cfg.clustering.num_units(), "the clustering");

  if (n == 0) fail("unit count unknown: give \"n\", a network, or a clustering");
  cfg.n = n;
  if (!have_network) cfg.network = AdjacencyMatrix(n);
  if (!have_clustering) cfg.clustering = Clustering::singletons(n);

  cfg.mapping = parse_mapping(require(root, "mapping", "config"));

  const json& inst = require(root, "instance", "config");
  if (!inst.is_object()) fail("\"instance\" must be an object");
  cfg.outcome = parse_outcome(require(inst, "outcome", "instance"));
  cfg.noise = parse_noise(inst.contains("noise") ? inst["noise"] : json());
  cfg.drift = parse_drift(inst.contains("drift") ? inst["drift"] : json());

  cfg.policy = parse_policy(require(root, "policy", "config"));

  if (root.contains("replications")) {
    cfg.replications = root["replications"].get<std::size_t>();
    if (cfg.replications == 0) fail("\"replications\" must be at least 1");
  }
  if (root.contains("seed")) cfg.seed = root["seed"].get<std::uint64_t>();
  if (root.contains("budget")) {
    cfg.budget = root["budget"].get<std::size_t>();
    if (cfg.budget == 0) fail("\"budget\" must be positive");
  }
  if (root.contains("grid")) {
    const json& grid = root["grid"];
    if (!grid.is_object()) fail("\"grid\" must be an object");
    if (grid.contains("T"))
      cfg.grid_t = grid["T"].get<std::vector<std::int64_t>>();
    if (grid.contains("T1"))
      cfg.grid_t1 = grid["T1"].get<std::vector<std::int64_t>>();
    for (std::int64_t t : cfg.grid_t)
      if (t < 1) fail("grid T values must be positive");
    for (std::int64_t t1 : cfg.grid_t1)
      if (t1 < 0) fail("grid T1 values must be non-negative");
  }
  if (root.contains("traces")) cfg.traces = root["traces"].get<bool>();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  const std::string text = read_text_file(path);
  // File references inside the config resolve relative to the config file.
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(path).parent_path();
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  if (root.is_object() && !dir.empty()) {
    for (const char* key : {"network_file", "clustering_file"}) {
      if (root.contains(key)) {
        fs::path p = root[key].get<std::string>();
        if (p.is_relative()) root[key] = (dir / p).string();
      }
    }
  }
  ExperimentConfig cfg = parse_config_json(root.dump());
  cfg.config_hash = fnv1a64(text);  // hash the file as written, not the dump
  return cfg;
}

}  // namespace netbandit
