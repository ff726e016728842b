#pragma once

// Experiment assembly and execution: config -> (exposure space, instance,
// oracle), per-replication runs with per-replication child seeds, a worker
// pool whose output is invariant to the worker count, grid sweeps over T and
// T1, and the results.csv / aggregate.json / trace_<rep>.jsonl writers.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "netbandit/config.hpp"
#include "netbandit/exposure.hpp"
#include "netbandit/instance.hpp"
#include "netbandit/metrics.hpp"
#include "netbandit/oracle.hpp"
#include "netbandit/policies.hpp"

namespace netbandit {

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

struct Experiment {
  ExperimentConfig config;
  std::shared_ptr<const ExposureContext> context;
  ExposureArmSpace space;
  std::shared_ptr<const Instance> instance;
  OracleReport report;
  bool one_to_one = false;
};

Experiment build_experiment(const ExperimentConfig& cfg);

// Round count below which the importance-weighted score concentration for the
// adaptive-weights policies is not guaranteed:
//   (2m+1)^2 log(t m^2) / (2(e-2) m)  with m arms.
// Runs that undercut it are legal; validation only warns.
double ipw_concentration_threshold(std::int64_t t, std::size_t num_arms);

ValidationReport validate_experiment(const Experiment& ex);
ValidationReport validate_config(const ExperimentConfig& cfg);

struct RunResult {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double cumulative_regret = 0.0;
  double estimation_error = 0.0;  // NaN when the run produced no estimate
  std::optional<AteEstimate> estimate;
  RunTrace trace;  // records kept only when requested
};

RunResult run_one(const Experiment& ex, const PolicySpec& spec, std::size_t rep, bool keep_trace);

struct ReplicatedResult {
  PolicySpec spec;
  std::int64_t horizon = 0;
  std::int64_t t1 = 0;  // resolved value actually used
  std::vector<RunResult> runs;
  AggregateResult aggregate;
};

ReplicatedResult run_replicated(const Experiment& ex, const PolicySpec& spec,
                                std::size_t replications, std::size_t workers, bool keep_traces);

// One PolicySpec per grid point: the cross product of grid.T (or the policy's
// own T) with grid.T1 (or the policy's own T1 / its default).
std::vector<PolicySpec> grid_policy_specs(const ExperimentConfig& cfg);
std::vector<ReplicatedResult> run_grid(const Experiment& ex, std::size_t workers);

// Runs fn(0..count-1) on up to `workers` threads. Which thread runs which
// index is unspecified; callers must make the result order-independent (each
// index writing its own slot suffices). First exception is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

// results.csv: one row per replication per grid point.
void write_results_csv(const std::string& path, const Experiment& ex,
                       const std::vector<ReplicatedResult>& points);
// aggregate.json: space cardinalities, oracle summary, per-point aggregates.
void write_aggregate_json(const std::string& path, const Experiment& ex,
                          const std::vector<ReplicatedResult>& points);
// trace_<rep>.jsonl per replication; grids with several points write each
// point's traces into a T<T>_T1<T1>/ subdirectory to keep names stable.
void write_traces(const std::string& out_dir, const ReplicatedResult& point, bool multi_point);
// results.csv + aggregate.json (+ traces when the config asks for them).
void write_artifacts(const std::string& out_dir, const Experiment& ex,
                     const std::vector<ReplicatedResult>& points);

}  // namespace netbandit
