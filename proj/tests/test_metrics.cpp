#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "netbandit/metrics.hpp"
#include "netbandit/rng.hpp"

using namespace netbandit;

namespace {

RunTrace trace_with_increments(const std::vector<double>& incs) {
  RunTrace trace;
  std::int64_t t = 1;
  for (double inc : incs) trace.records.push_back({t++, 0, 0.5, inc});
  return trace;
}

}  // namespace

TEST_CASE("always playing the best arm accrues zero regret") {
  CHECK(cumulative_regret(trace_with_increments(std::vector<double>(10, 0.0))) == 0.0);
}

TEST_CASE("constant-gap increments add up linearly") {
  CHECK(cumulative_regret(trace_with_increments(std::vector<double>(10, 0.4))) ==
        doctest::Approx(4.0));
}

TEST_CASE("aggregate means and standard errors") {
  AggregateResult agg = aggregate_results({10.0, 14.0}, {0.1, 0.3});
  CHECK(agg.replications == 2);
  CHECK(agg.error_replications == 2);
  CHECK(agg.mean_regret == doctest::Approx(12.0));
  CHECK(agg.mean_error == doctest::Approx(0.2));
  // sample sd 2sqrt(2), se = sd / sqrt(2) = 2
  CHECK(agg.se_regret == doctest::Approx(2.0));
  CHECK(agg.se_error == doctest::Approx(0.1));
  CHECK(agg.product == doctest::Approx(std::sqrt(12.0) * 0.2));
  CHECK(tradeoff_product(agg) == doctest::Approx(agg.product));
}

TEST_CASE("runs without an estimate are excluded from error statistics") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  AggregateResult agg = aggregate_results({10.0, 14.0, 12.0}, {0.1, nan, 0.3});
  CHECK(agg.replications == 3);
  CHECK(agg.error_replications == 2);
  CHECK(agg.mean_regret == doctest::Approx(12.0));
  CHECK(agg.mean_error == doctest::Approx(0.2));

  AggregateResult none = aggregate_results({10.0}, {nan});
  CHECK(none.error_replications == 0);
  CHECK(std::isnan(none.mean_error));
  CHECK(std::isnan(none.product));
}

TEST_CASE("a single replication has zero standard error") {
  AggregateResult agg = aggregate_results({7.0}, {0.25});
  CHECK(agg.se_regret == 0.0);
  CHECK(agg.se_error == 0.0);
}

TEST_CASE("trade-off product scales as root regret times error") {
  AggregateResult agg = aggregate_results({100.0, 100.0}, {0.5, 0.5});
  CHECK(agg.product == doctest::Approx(5.0));
  AggregateResult zero = aggregate_results({100.0, 100.0}, {0.0, 0.0});
  CHECK(zero.product == 0.0);
}

TEST_CASE("log-log slope of a power law is its exponent") {
  SlopeFit identity = loglog_slope({1.0, 2.0, 4.0, 8.0}, {1.0, 2.0, 4.0, 8.0});
  CHECK(identity.slope == doctest::Approx(1.0));
  CHECK(identity.r_squared == doctest::Approx(1.0));

  std::vector<double> xs{4.0, 16.0, 64.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(1.0 / std::sqrt(x));
  SlopeFit root = loglog_slope(xs, ys);
  CHECK(std::fabs(root.slope - (-0.5)) < 1e-10);
  CHECK(root.intercept == doctest::Approx(0.0));
}

TEST_CASE("slope estimation tolerates multiplicative noise") {
  std::vector<double> xs, ys;
  Rng rng(17);
  for (int e = 4; e <= 14; ++e) {
    const double x = std::pow(2.0, e);
    xs.push_back(x);
    ys.push_back(std::sqrt(x) * std::exp(0.02 * rng.normal()));
  }
  SlopeFit fit = loglog_slope(xs, ys);
  CHECK(std::fabs(fit.slope - 0.5) < 0.02);
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("slope fitting rejects degenerate input") {
  CHECK_THROWS(loglog_slope({1.0, 2.0}, {1.0, 2.0}));            // too few points
  CHECK_THROWS(loglog_slope({1.0, 2.0, 0.0}, {1.0, 2.0, 3.0}));  // nonpositive x
  CHECK_THROWS(loglog_slope({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0})); // nonpositive y
  CHECK_THROWS(loglog_slope({1.0, 2.0, 3.0}, {1.0, 2.0}));       // length mismatch
}

TEST_CASE("pareto front basics") {
  CHECK(pareto_front_indices({{3.0, 0.2}}) == std::vector<std::size_t>{0});

  std::vector<ParetoPoint> pts{{1.0, 2.0}, {2.0, 1.0}, {2.0, 2.0}};
  CHECK(pareto_front_indices(pts) == std::vector<std::size_t>({0, 1}));

  std::vector<ParetoPoint> dup{{1.0, 1.0}, {1.0, 1.0}, {2.0, 2.0}};
  CHECK(pareto_front_indices(dup) == std::vector<std::size_t>({0, 1}));
}

namespace {

std::vector<std::size_t> brute_force_front(const std::vector<ParetoPoint>& pts) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool weak = pts[j].regret <= pts[i].regret && pts[j].error <= pts[i].error;
      const bool strict = pts[j].regret < pts[i].regret || pts[j].error < pts[i].error;
      if (weak && strict) dominated = true;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("pareto front matches quadratic brute force on random clouds") {
  Rng rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ParetoPoint> pts;
    const std::size_t count = 1 + rng.uniform_int(60);
    for (std::size_t i = 0; i < count; ++i) {
      // a coarse grid makes ties and duplicates likely
      pts.push_back({std::floor(rng.uniform() * 8.0), std::floor(rng.uniform() * 8.0)});
    }
    CHECK(pareto_front_indices(pts) == brute_force_front(pts));
  }
}

TEST_CASE("pareto front preserves input order") {
  std::vector<ParetoPoint> pts{{5.0, 0.1}, {1.0, 0.5}, {3.0, 0.3}};
  std::vector<std::size_t> idx = pareto_front_indices(pts);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  std::vector<ParetoPoint> front = pareto_front(pts);
  REQUIRE(front.size() == idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    CHECK(front[i].regret == pts[idx[i]].regret);
    CHECK(front[i].error == pts[idx[i]].error);
  }
}

TEST_CASE("kahan summation survives a pathological ordering") {
  KahanSum sum;
  sum.add(1.0e16);
  for (int i = 0; i < 10000; ++i) sum.add(1.0);
  sum.add(-1.0e16);
  CHECK(sum.value() == doctest::Approx(10000.0));
}
