#include "netbandit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace netbandit {

double cumulative_regret(const RunTrace& trace) {
  KahanSum sum;
  for (const auto& rec : trace.records) sum.add(rec.regret_inc);
  return sum.value();
}

namespace {

void mean_and_se(const std::vector<double>& xs, double& mean, double& se) {
  const std::size_t n = xs.size();
  if (n == 0) {
    mean = std::numeric_limits<double>::quiet_NaN();
    se = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  KahanSum s;
  for (double x : xs) s.add(x);
  mean = s.value() / static_cast<double>(n);
  if (n < 2) {
    se = 0.0;
    return;
  }
  KahanSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  const double var = sq.value() / static_cast<double>(n - 1);
  se = std::sqrt(var / static_cast<double>(n));
}

}  // namespace

AggregateResult aggregate_results(const std::vector<double>& regrets,
                                  const std::vector<double>& errors) {
  if (regrets.size() != errors.size())
    throw std::invalid_argument("aggregate: regret/error size mismatch");
  if (regrets.empty()) throw std::invalid_argument("aggregate: no replications");
  AggregateResult agg;
  agg.replications = regrets.size();
  mean_and_se(regrets, agg.mean_regret, agg.se_regret);
  std::vector<double> present;
  present.reserve(errors.size());
  for (double e : errors)
    if (!std::isnan(e)) present.push_back(e);
  agg.error_replications = present.size();
  mean_and_se(present, agg.mean_error, agg.se_error);
  agg.product = tradeoff_product(agg);
  return agg;
}

double tradeoff_product(const AggregateResult& agg) {
  return std::sqrt(agg.mean_regret) * agg.mean_error;
}

SlopeFit loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  if (xs.size() < 3) throw std::invalid_argument("loglog_slope: need at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("loglog_slope: inputs must be strictly positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: degenerate x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

std::vector<std::size_t> pareto_front_indices(const std::vector<ParetoPoint>& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].regret != points[b].regret) return points[a].regret < points[b].regret;
    if (points[a].error != points[b].error) return points[a].error < points[b].error;
    return a < b;
  });
  // Sweep regret groups in increasing order. A point survives iff its error
  // equals its group's minimum and beats the best error of every smaller-regret
  // group strictly; exact duplicates share the group minimum and all survive.
  std::vector<std::size_t> keep;
  double best_error = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    double gmin = std::numeric_limits<double>::infinity();
    while (j < n && points[order[j]].regret == points[order[i]].regret) {
      gmin = std::min(gmin, points[order[j]].error);
      ++j;
    }
    if (gmin < best_error) {
      for (std::size_t k = i; k < j; ++k)
        if (points[order[k]].error == gmin) keep.push_back(order[k]);
      best_error = gmin;
    }
    i = j;
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
  std::vector<ParetoPoint> out;
  for (std::size_t idx : pareto_front_indices(points)) out.push_back(points[idx]);
  return out;
}

}  // namespace netbandit
