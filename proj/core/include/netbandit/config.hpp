#pragma once

// JSON experiment configuration. Schema (see README for the full reference):
//
// {
//   "config_id": "name",            optional
//   "k": 2,                         arms per unit, required
//   "n": 4,                         optional when network/clustering give it
//   "network": {"n":..,"edges":[[i,j,w],..]} or "network_file": "path",
//   "clustering": {"assignment":[..]} or "clustering_file": "path",
//   "mapping": {"variant":"per_unit"|"global_proportion"|
//               "neighborhood_threshold"|"cluster_proportion",
//               "threshold": 0.5, "restrict_labels": [..]},
//   "instance": {"outcome": {...}, "noise": {...}, "drift": {...}},
//   "policy": {"name":"ucb_tsn"|"exp3_tsn"|"uniform"|"ucb"|"exp3",
//              "T": int, "T1": int?, "delta"?, "bonus_c"?, "epsilon"?},
//   "replications": 1, "seed": 0, "budget": 1048576,
//   "grid": {"T": [..], "T1": [..]},   optional scaling axes
//   "traces": false
// }
//
// Omitted network: zero matrix on n units. Omitted clustering: singletons.
// Exposure-faithful outcome entries not listed default to mean 0.

#include <cstdint>
#include <string>
#include <vector>

#include "netbandit/exposure.hpp"
#include "netbandit/instance.hpp"
#include "netbandit/network.hpp"
#include "netbandit/policies.hpp"

namespace netbandit {

struct OutcomeSpec {
  OutcomeVariant variant = OutcomeVariant::NeedleInstance;
  double gap = 0.0;               // needle
  std::vector<int> target;        // needle
  struct FaithfulEntry {
    std::size_t unit = 0;
    double label = 0.0;           // matched against the exact codomain
    double mean = 0.0;
  };
  std::vector<FaithfulEntry> faithful_entries;
  struct TableEntry {
    std::vector<int> arm;
    std::vector<double> means;
  };
  std::vector<TableEntry> table_entries;
};

struct ExperimentConfig {
  std::string config_id = "experiment";
  std::size_t n = 0;
  int k = 2;
  AdjacencyMatrix network;
  Clustering clustering;
  ExposureMapSpec mapping;
  OutcomeSpec outcome;
  NoiseModel noise;
  DriftSchedule drift;
  PolicySpec policy;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::size_t budget = kDefaultEnumerationBudget;
  std::vector<std::int64_t> grid_t;
  std::vector<std::int64_t> grid_t1;
  bool traces = false;
  std::uint64_t config_hash = 0;  // FNV-1a of the raw config text
};

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace netbandit
