#include "netbandit/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace netbandit {
namespace {

using nlohmann::json;

OutcomeModel materialize_outcome(const ExperimentConfig& cfg, const ExposureContext& ctx) {
  OutcomeModel model;
  model.variant = cfg.outcome.variant;
  switch (cfg.outcome.variant) {
    case OutcomeVariant::NeedleInstance: {
      model.gap = cfg.outcome.gap;
      model.target = SuperArm(cfg.outcome.target);
      break;
    }
    case OutcomeVariant::ExposureFaithful: {
      const std::size_t d = ctx.codomain().size();
      model.unit_label_means.assign(cfg.n, std::vector<double>(d, 0.0));
      for (const auto& e : cfg.outcome.faithful_entries) {
        if (e.unit >= cfg.n)
          throw std::invalid_argument("outcome mean references unit " + std::to_string(e.unit) +
                                      " of " + std::to_string(cfg.n));
        std::size_t idx = d;
        for (std::size_t j = 0; j < d; ++j) {
          if (ctx.codomain()[j].matches(e.label)) {
            idx = j;
            break;
          }
        }
        if (idx == d)
          throw std::invalid_argument("outcome mean label " + std::to_string(e.label) +
                                      " is not in the mapping codomain");
        model.unit_label_means[e.unit][idx] = e.mean;
      }
      break;
    }
    case OutcomeVariant::DenseTable: {
      for (const auto& e : cfg.outcome.table_entries) {
        SuperArm arm(e.arm);
        if (model.table.count(arm))
          throw std::invalid_argument("duplicate super arm in the outcome table");
        model.table.emplace(std::move(arm), e.means);
      }
      break;
    }
  }
  return model;
}

bool is_adaptive_family(PolicyName name) {
  return name == PolicyName::Exp3Tsn || name == PolicyName::Exp3;
}

std::string fmt_g17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json estimate_to_json(const AteEstimate& est) {
  json triples = json::array();
  const std::size_t m = est.values.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      triples.push_back({i, j, est.values[i][j]});
  return {{"source", est.source == EstimateSource::MeanDiff ? "mean_diff" : "ipw"},
          {"frozen_at", est.frozen_at},
          {"values", std::move(triples)}};
}

}  // namespace

Experiment build_experiment(const ExperimentConfig& cfg) {
  Experiment ex;
  ex.config = cfg;
  ex.context = std::make_shared<ExposureContext>(cfg.mapping, cfg.network, cfg.clustering,
                                                 cfg.k, cfg.budget);
  ex.space = ex.context->enumerate_exposure_space();
  ex.instance = std::make_shared<Instance>(materialize_outcome(cfg, *ex.context), cfg.noise,
                                           cfg.drift, cfg.n, cfg.k, cfg.network, cfg.clustering,
                                           ex.context);
  OracleOptions opts;
  opts.mc_seed = splitmix64(cfg.seed ^ 0x6f7261636c65ULL);
  ex.report = compute_oracle_report(*ex.instance, *ex.context, ex.space, opts);
  ex.one_to_one = is_one_to_one(*ex.context, ex.space);
  return ex;
}

double ipw_concentration_threshold(std::int64_t t, std::size_t num_arms) {
  if (t < 1 || num_arms < 2) return std::numeric_limits<double>::infinity();
  const double m = static_cast<double>(num_arms);
  const double e = std::exp(1.0);
  return (2.0 * m + 1.0) * (2.0 * m + 1.0) * std::log(static_cast<double>(t) * m * m) /
         (2.0 * (e - 2.0) * m);
}

ValidationReport validate_experiment(const Experiment& ex) {
  ValidationReport report;
  const ExperimentConfig& cfg = ex.config;
  const std::size_t m = ex.space.size();
  auto err = [&](const std::string& msg) { report.errors.push_back(msg); };
  auto warn = [&](const std::string& msg) { report.warnings.push_back(msg); };

  if (cfg.replications == 0) err("replications must be at least 1");

  for (const PolicySpec& spec : grid_policy_specs(cfg)) {
    const std::string at = "[" + std::string(policy_name_string(spec.name)) +
                           " T=" + std::to_string(spec.horizon) + "] ";
    if (spec.horizon < 1) {
      err(at + "horizon must be at least 1");
      continue;
    }
    std::int64_t t1 = 0;
    try {
      t1 = resolve_t1(spec, m);
    } catch (const std::exception& e) {
      err(at + e.what());
      continue;
    }
    if (static_cast<std::int64_t>(m) > spec.horizon)
      err(at + "the design needs |U_E| <= T, got |U_E| = " + std::to_string(m) + " > T = " +
          std::to_string(spec.horizon));
    if (t1 > spec.horizon)
      err(at + "T1 = " + std::to_string(t1) + " exceeds T = " + std::to_string(spec.horizon));
    if (cfg.drift.variant == DriftVariant::Table &&
        static_cast<std::int64_t>(cfg.drift.values.size()) < spec.horizon)
      err(at + "drift table has " + std::to_string(cfg.drift.values.size()) +
          " entries but the horizon is " + std::to_string(spec.horizon));

    if (spec.name == PolicyName::UcbTsn) {
      if (t1 == 0)
        warn(at + "T1 = 0: the run produces no treatment-effect estimate");
      else if (t1 < static_cast<std::int64_t>(m))
        err(at + "round robin cannot cover " + std::to_string(m) + " arms in T1 = " +
            std::to_string(t1) + " rounds");
    }
    if (spec.name == PolicyName::Exp3Tsn && t1 == 0)
      warn(at + "T1 = 0: the run produces no treatment-effect estimate");
    if (spec.name == PolicyName::Uniform && t1 > 0 && t1 < static_cast<std::int64_t>(m))
      warn(at + "T1 = " + std::to_string(t1) + " < |U_E| = " + std::to_string(m) +
           ": no arm coverage is possible, so no estimate will be produced");

    if (is_adaptive_family(spec.name)) {
      const bool bounded = cfg.noise.variant == NoiseVariant::BoundedBernoulli ||
                           (cfg.noise.variant == NoiseVariant::Gaussian && cfg.noise.sigma == 0.0);
      if (!bounded)
        err(at + "adaptive-weights policies need rewards in [0, 1]; use bounded_bernoulli noise");
      const double tt = ipw_concentration_threshold(spec.horizon, m);
      if (static_cast<double>(spec.horizon) < tt)
        warn(at + "T = " + std::to_string(spec.horizon) +
             " is below the importance-weighting concentration threshold " + fmt_g17(tt) +
             "; adversarial guarantees may not bind");
      if (spec.name == PolicyName::Exp3Tsn && t1 > 0) {
        const double tt1 = ipw_concentration_threshold(t1, m);
        if (static_cast<double>(t1) < tt1)
          warn(at + "T1 = " + std::to_string(t1) +
               " is below the importance-weighting concentration threshold " + fmt_g17(tt1) +
               " for the estimation phase");
      }
    }
  }

  if (ex.report.method == OracleMethod::MonteCarlo)
    warn("ground truth uses Monte Carlo (" + std::to_string(ex.report.mc_samples) +
         " samples per arm); estimation errors are measured against it");
  return report;
}

ValidationReport validate_config(const ExperimentConfig& cfg) {
  ValidationReport report;
  Experiment ex;
  try {
    ex = build_experiment(cfg);
  } catch (const std::exception& e) {
    report.errors.push_back(e.what());
    return report;
  }
  return validate_experiment(ex);
}

RunResult run_one(const Experiment& ex, const PolicySpec& spec, std::size_t rep, bool keep_trace) {
  RunResult out;
  out.rep = rep;
  out.seed = child_seed(ex.config.seed, rep);
  Rng rng(out.seed);
  Policy policy(spec, ex.space.size());

  const std::size_t n = ex.instance->num_units();
  SuperArm a;
  a.actions.assign(n, 0);
  std::vector<double> y(n, 0.0);
  KahanSum regret;
  if (keep_trace) {
    out.trace.seed = out.seed;
    out.trace.records.reserve(static_cast<std::size_t>(spec.horizon));
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::int64_t t = 1; t <= spec.horizon; ++t) {
    const std::size_t arm = policy.choose(rng);
    const ExposureSuperArm& s = ex.space.arm(arm);
    ex.context->sample_compatible_into(s, rng, a);
    ex.instance->pull_with_profile_into(a, s, t, rng, y);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean *= inv_n;
    policy.update(arm, mean);
    const double inc = ex.report.regret_increments[arm];
    regret.add(inc);
    if (keep_trace) out.trace.records.push_back({t, arm, mean, inc});
  }
  out.cumulative_regret = regret.value();
  out.estimate = policy.ate_snapshot();
  out.estimation_error = out.estimate ? estimation_error(*out.estimate, ex.report)
                                      : std::numeric_limits<double>::quiet_NaN();
  if (keep_trace) out.trace.estimate = out.estimate;
  return out;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers > count) workers = count;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ReplicatedResult run_replicated(const Experiment& ex, const PolicySpec& spec,
                                std::size_t replications, std::size_t workers, bool keep_traces) {
  ReplicatedResult out;
  out.spec = spec;
  out.horizon = spec.horizon;
  out.t1 = resolve_t1(spec, ex.space.size());
  out.runs.resize(replications);
  parallel_for(replications, workers,
               [&](std::size_t rep) { out.runs[rep] = run_one(ex, spec, rep, keep_traces); });
  std::vector<double> regrets(replications), errors(replications);
  for (std::size_t i = 0; i < replications; ++i) {
    regrets[i] = out.runs[i].cumulative_regret;
    errors[i] = out.runs[i].estimation_error;
  }
  out.aggregate = aggregate_results(regrets, errors);
  return out;
}

std::vector<PolicySpec> grid_policy_specs(const ExperimentConfig& cfg) {
  std::vector<std::int64_t> ts = cfg.grid_t;
  if (ts.empty()) ts.push_back(cfg.policy.horizon);
  std::vector<PolicySpec> out;
  for (std::int64_t t : ts) {
    PolicySpec spec = cfg.policy;
    spec.horizon = t;
    if (cfg.grid_t1.empty()) {
      out.push_back(spec);
    } else {
      for (std::int64_t t1 : cfg.grid_t1) {
        spec.t1 = t1;
        out.push_back(spec);
      }
    }
  }
  return out;
}

std::vector<ReplicatedResult> run_grid(const Experiment& ex, std::size_t workers) {
  std::vector<ReplicatedResult> out;
  for (const PolicySpec& spec : grid_policy_specs(ex.config))
    out.push_back(run_replicated(ex, spec, ex.config.replications, workers, ex.config.traces));
  return out;
}

void write_results_csv(const std::string& path, const Experiment& ex,
                       const std::vector<ReplicatedResult>& points) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "config_id,seed,policy,T,T1,num_arms,cumulative_regret,estimation_error\n";
  const std::string id = csv_escape(ex.config.config_id);
  for (const ReplicatedResult& p : points) {
    const char* policy = policy_name_string(p.spec.name);
    for (const RunResult& r : p.runs) {
      out << id << ',' << r.seed << ',' << policy << ',' << p.horizon << ',' << p.t1 << ','
          << ex.space.size() << ',' << fmt_g17(r.cumulative_regret) << ','
          << fmt_g17(r.estimation_error) << '\n';
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_aggregate_json(const std::string& path, const Experiment& ex,
                          const std::vector<ReplicatedResult>& points) {
  const ExperimentConfig& cfg = ex.config;
  json root;
  root["config_id"] = cfg.config_id;
  root["config_hash"] = hash_hex(cfg.config_hash);
  root["policy"] = policy_name_string(cfg.policy.name);
  root["seed"] = cfg.seed;
  root["replications"] = cfg.replications;
  root["num_units"] = cfg.n;
  root["num_arms"] = ex.space.size();
  root["num_cluster_profiles"] = ex.space.cluster_profile_count();
  root["num_realizable"] = ex.space.realizable_count();
  root["counts_saturated"] = ex.space.counts_saturated();
  root["one_to_one"] = ex.one_to_one;
  json oracle;
  oracle["method"] = ex.report.method == OracleMethod::Exact ? "exact" : "monte_carlo";
  oracle["best_arm_index"] = ex.report.best_arm_index;
  oracle["averaged_means"] = ex.report.averaged_means;
  oracle["regret_increments"] = ex.report.regret_increments;
  if (ex.report.method == OracleMethod::MonteCarlo) {
    oracle["mc_samples"] = ex.report.mc_samples;
    oracle["mc_seed"] = ex.report.mc_seed;
  }
  root["oracle"] = std::move(oracle);
  json pts = json::array();
  for (const ReplicatedResult& p : points) {
    pts.push_back({{"T", p.horizon},
                   {"T1", p.t1},
                   {"replications", p.aggregate.replications},
                   {"error_replications", p.aggregate.error_replications},
                   {"mean_regret", p.aggregate.mean_regret},
                   {"se_regret", p.aggregate.se_regret},
                   {"mean_error", p.aggregate.mean_error},
                   {"se_error", p.aggregate.se_error},
                   {"product", p.aggregate.product}});
  }
  root["points"] = std::move(pts);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << root.dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_traces(const std::string& out_dir, const ReplicatedResult& point, bool multi_point) {
  namespace fs = std::filesystem;
  fs::path dir = out_dir;
  if (multi_point) {
    dir /= "T" + std::to_string(point.horizon) + "_T1" + std::to_string(point.t1);
    fs::create_directories(dir);
  }
  for (const RunResult& r : point.runs) {
    const fs::path path = dir / ("trace_" + std::to_string(r.rep) + ".jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const TraceRecord& rec : r.trace.records) {
      out << json({{"t", rec.t},
                   {"arm", rec.arm},
                   {"reward_bar", rec.reward_bar},
                   {"regret_inc", rec.regret_inc}})
                 .dump()
          << '\n';
    }
    json last;
    last["final"] = true;
    last["seed"] = r.seed;
    last["cumulative_regret"] = r.cumulative_regret;
    last["estimation_error"] =
        std::isnan(r.estimation_error) ? json() : json(r.estimation_error);
    if (r.estimate) last["estimate"] = estimate_to_json(*r.estimate);
    out << last.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
}

void write_artifacts(const std::string& out_dir, const Experiment& ex,
                     const std::vector<ReplicatedResult>& points) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_results_csv((fs::path(out_dir) / "results.csv").string(), ex, points);
  write_aggregate_json((fs::path(out_dir) / "aggregate.json").string(), ex, points);
  if (ex.config.traces) {
    for (const ReplicatedResult& p : points) write_traces(out_dir, p, points.size() > 1);
  }
}

}  // namespace netbandit
