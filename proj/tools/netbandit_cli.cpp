// Command-line front end:
//   run              execute the configured experiment, write artifacts
//   enumerate-space  print the exposure space (|U_C|, |U_O|, U_E) as JSON
//   oracle           print ground truth (means, best arm, ATE matrix) as JSON
//   validate         check a config and report errors/warnings
//
// Exit codes: 0 success, 2 config/validation problems, 1 internal errors.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "netbandit/config.hpp"
#include "netbandit/harness.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
  std::string config_path;
};

netbandit::ExperimentConfig load(const CommonArgs& args) {
  return netbandit::load_config_file(args.config_path);
}

void print_validation(const netbandit::ValidationReport& report) {
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const std::string& e : report.errors) std::cerr << "error: " << e << "\n";
}

int cmd_run(const CommonArgs& args, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<std::size_t> reps,
            std::size_t workers, bool traces) {
  netbandit::ExperimentConfig cfg = load(args);
  if (seed) cfg.seed = *seed;
  if (reps) cfg.replications = *reps;
  if (traces) cfg.traces = true;
  netbandit::Experiment ex = netbandit::build_experiment(cfg);
  netbandit::ValidationReport report = netbandit::validate_experiment(ex);
  print_validation(report);
  if (!report.ok()) return kExitConfig;
  std::vector<netbandit::ReplicatedResult> points = netbandit::run_grid(ex, workers);
  netbandit::write_artifacts(out_dir, ex, points);
  for (const netbandit::ReplicatedResult& p : points) {
    std::printf("T=%lld T1=%lld reps=%zu mean_regret=%.6g mean_error=%.6g product=%.6g\n",
                static_cast<long long>(p.horizon), static_cast<long long>(p.t1),
                p.aggregate.replications, p.aggregate.mean_regret, p.aggregate.mean_error,
                p.aggregate.product);
  }
  std::printf("wrote %s/results.csv and %s/aggregate.json\n", out_dir.c_str(), out_dir.c_str());
  return kExitOk;
}

int cmd_enumerate(const CommonArgs& args) {
  netbandit::ExperimentConfig cfg = load(args);
  netbandit::ExposureContext ctx(cfg.mapping, cfg.network, cfg.clustering, cfg.k, cfg.budget);
  netbandit::ExposureArmSpace space = ctx.enumerate_exposure_space();
  json root;
  root["num_cluster_profiles"] = space.cluster_profile_count();
  root["num_realizable"] = space.realizable_count();
  root["num_arms"] = space.size();
  root["counts_saturated"] = space.counts_saturated();
  json codomain = json::array();
  for (const netbandit::Rational& r : ctx.codomain()) codomain.push_back(r.str());
  root["codomain"] = std::move(codomain);
  json arms = json::array();
  for (const netbandit::ExposureSuperArm& s : space.arms()) {
    json values = json::array();
    for (int label : s.labels) values.push_back(ctx.codomain()[label].value());
    arms.push_back({{"labels", s.labels}, {"values", std::move(values)}});
  }
  root["arms"] = std::move(arms);
  std::cout << root.dump(2) << "\n";
  return kExitOk;
}

int cmd_oracle(const CommonArgs& args) {
  netbandit::ExperimentConfig cfg = load(args);
  netbandit::Experiment ex = netbandit::build_experiment(cfg);
  json root;
  root["method"] = ex.report.method == netbandit::OracleMethod::Exact ? "exact" : "monte_carlo";
  root["best_arm_index"] = ex.report.best_arm_index;
  root["averaged_means"] = ex.report.averaged_means;
  root["exposure_means"] = ex.report.exposure_means;
  root["ate_matrix"] = ex.report.ate_matrix;
  root["regret_increments"] = ex.report.regret_increments;
  if (ex.report.method == netbandit::OracleMethod::MonteCarlo) {
    root["mc_samples"] = ex.report.mc_samples;
    root["mc_seed"] = ex.report.mc_seed;
  }
  std::cout << root.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
  netbandit::ExperimentConfig cfg = load(args);
  netbandit::ValidationReport report = netbandit::validate_config(cfg);
  print_validation(report);
  if (report.ok()) {
    std::cout << "ok (" << report.warnings.size() << " warning"
              << (report.warnings.size() == 1 ? "" : "s") << ")\n";
    return kExitOk;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit experiments over network exposure mappings"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* run = app.add_subcommand("run", "Run the experiment and write artifacts");
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::size_t workers = 1;
  bool traces = false;
  run->add_option("--config", common.config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (default: out)");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--reps", reps, "Override the replication count");
  run->add_option("--workers", workers, "Worker threads (results do not depend on this)");
  run->add_flag("--traces", traces, "Write per-round trace_<rep>.jsonl files");

  auto* enumerate = app.add_subcommand("enumerate-space", "Print the exposure arm space");
  enumerate->add_option("--config", common.config_path, "Experiment config (JSON)")->required();

  auto* oracle = app.add_subcommand("oracle", "Print ground truth for the configured instance");
  oracle->add_option("--config", common.config_path, "Experiment config (JSON)")->required();

  auto* validate = app.add_subcommand("validate", "Check the config and exit");
  validate->add_option("--config", common.config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(common, out_dir, seed, reps, workers, traces);
    if (enumerate->parsed()) return cmd_enumerate(common);
    if (oracle->parsed()) return cmd_oracle(common);
    if (validate->parsed()) return cmd_validate(common);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
