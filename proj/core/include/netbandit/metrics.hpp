#pragma once

// Run traces and derived quantities: cumulative pseudo-regret, replication
// aggregates with standard errors, the sqrt(regret) x error trade-off product,
// log-log scaling slopes, and empirical Pareto fronts over (regret, error).

#include <cstdint>
#include <optional>
#include <vector>

#include "netbandit/estimators.hpp"

namespace netbandit {

struct TraceRecord {
  std::int64_t t = 0;
  std::size_t arm = 0;
  double reward_bar = 0.0;   // unit-averaged realized reward
  double regret_inc = 0.0;   // oracle increment for the chosen arm
};

struct RunTrace {
  std::vector<TraceRecord> records;
  std::optional<AteEstimate> estimate;
  std::uint64_t seed = 0;
};

double cumulative_regret(const RunTrace& trace);

struct AggregateResult {
  double mean_regret = 0.0;
  double se_regret = 0.0;
  double mean_error = 0.0;
  double se_error = 0.0;
  double product = 0.0;  // sqrt(mean_regret) * mean_error
  std::size_t replications = 0;
  std::size_t error_replications = 0;  // replications that produced an estimate
};

// Folds per-replication (regret, error) pairs with compensated summation, in
// input order, so aggregates do not depend on worker scheduling. NaN errors
// (runs without an estimate) are excluded from the error statistics.
AggregateResult aggregate_results(const std::vector<double>& regrets,
                                  const std::vector<double>& errors);

double tradeoff_product(const AggregateResult& agg);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log(y) on log(x); needs >= 3 strictly positive points.
SlopeFit loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct ParetoPoint {
  double regret = 0.0;
  double error = 0.0;
};

// Indices of non-dominated points (weak dominance in both coordinates, strict
// in at least one), in input order. Exact duplicates are all retained: neither
// dominates the other.
std::vector<std::size_t> pareto_front_indices(const std::vector<ParetoPoint>& points);
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

// Compensated (Kahan) accumulator used wherever sums must be scheduling-stable.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace netbandit
