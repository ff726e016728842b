#pragma once

// Ground truth for an (instance, exposure space) pair: exposure-level mean
// rewards tilde-Y_i(S) under the uniform conditional law over compatible super
// arms, the optimal exposure arm S*, the true ATE matrix, and per-round
// pseudo-regret increments.
//
// tilde-Y is computed exactly whenever the outcome structure permits
// (exposure-faithful lookup, needle closed form, dense-table enumeration under
// budget) and falls back to seeded Monte Carlo otherwise.

#include <cstdint>
#include <vector>

#include "netbandit/exposure.hpp"
#include "netbandit/instance.hpp"

namespace netbandit {

enum class OracleMethod { Exact, MonteCarlo };

struct OracleReport {
  std::vector<std::vector<double>> exposure_means;  // [arm][unit]
  std::vector<double> averaged_means;               // unit-averaged, [arm]
  std::size_t best_arm_index = 0;
  std::vector<std::vector<double>> ate_matrix;      // [i][j] = avg_i' - avg_j'
  std::vector<double> regret_increments;            // [arm] = avg(S*) - avg(arm)
  OracleMethod method = OracleMethod::Exact;
  std::uint64_t mc_samples = 0;
  std::uint64_t mc_seed = 0;
};

struct OracleOptions {
  bool allow_monte_carlo = true;
  std::uint64_t mc_samples = 100000;
  std::uint64_t mc_seed = 0;
};

// tilde-Y_i(S): average of Y_i over the compatible set of S. Throws when the
// compatible set exceeds the budget and Monte Carlo is disallowed.
double exposure_mean(const Instance& instance, const ExposureContext& ctx, std::size_t unit,
                     const ExposureSuperArm& s, const OracleOptions& opts = {});

OracleReport compute_oracle_report(const Instance& instance, const ExposureContext& ctx,
                                   const ExposureArmSpace& space, const OracleOptions& opts = {});

std::size_t best_exposure_arm(const OracleReport& report);
double true_ate(const OracleReport& report, std::size_t arm_i, std::size_t arm_j);
double regret_increment(const OracleReport& report, std::size_t chosen_arm);

}  // namespace netbandit
