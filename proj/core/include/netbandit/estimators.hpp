#pragma once

// ATE estimates frozen at the end of phase 1 and their error against oracle
// truth. MeanDiff differences per-arm running means; Ipw differences the
// cumulative optimistic importance-weighted scores divided by T1. IPW values
// are deliberately not clamped: the unbiasedness analysis needs the raw
// martingale endpoint.

#include <cstdint>
#include <vector>

#include "netbandit/oracle.hpp"

namespace netbandit {

enum class EstimateSource { MeanDiff, Ipw };

struct AteEstimate {
  std::vector<std::vector<double>> values;  // [i][j], antisymmetric, zero diagonal
  EstimateSource source = EstimateSource::MeanDiff;
  std::int64_t frozen_at = 0;
};

// values[i][j] = means[i] - means[j]. Throws if any arm is uncovered.
AteEstimate mean_diff_ate(const std::vector<double>& means,
                          const std::vector<std::int64_t>& counts, std::int64_t t1);

// values[i][j] = (scores[i] - scores[j]) / t1. Throws if t1 = 0.
AteEstimate ipw_ate(const std::vector<double>& scores, std::int64_t t1);

// max_{i,j} |values[i][j] - ate_matrix[i][j]|.
double estimation_error(const AteEstimate& estimate, const OracleReport& report);

}  // namespace netbandit
