#include "netbandit/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace netbandit {

AteEstimate mean_diff_ate(const std::vector<double>& means,
                          const std::vector<std::int64_t>& counts, std::int64_t t1) {
  if (means.size() != counts.size())
    throw std::invalid_argument("mean_diff_ate: means/counts size mismatch");
  for (std::int64_t c : counts)
    if (c < 1) throw std::invalid_argument("mean_diff_ate: uncovered arm");
  const std::size_t m = means.size();
  AteEstimate est;
  est.source = EstimateSource::MeanDiff;
  est.frozen_at = t1;
  est.values.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) est.values[i][j] = means[i] - means[j];
  return est;
}

AteEstimate ipw_ate(const std::vector<double>& scores, std::int64_t t1) {
  if (t1 < 1) throw std::invalid_argument("ipw_ate: need at least one phase-1 round");
  const std::size_t m = scores.size();
  AteEstimate est;
  est.source = EstimateSource::Ipw;
  est.frozen_at = t1;
  est.values.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      est.values[i][j] = (scores[i] - scores[j]) / static_cast<double>(t1);
  return est;
}

double estimation_error(const AteEstimate& estimate, const OracleReport& report) {
  const std::size_t m = report.ate_matrix.size();
  if (estimate.values.size() != m)
    throw std::invalid_argument("estimation_error: arm space mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (estimate.values[i].size() != m)
      throw std::invalid_argument("estimation_error: arm space mismatch");
    for (std::size_t j = 0; j < m; ++j)
      worst = std::max(worst, std::fabs(estimate.values[i][j] - report.ate_matrix[i][j]));
  }
  return worst;
}

}  // namespace netbandit
