#include "netbandit/oracle.hpp"

#include <stdexcept>

namespace netbandit {

namespace {

// Exact tilde-Y for one arm when the structure allows it; returns false when
// only Monte Carlo can handle it (dense table with an oversized compatible set).
bool exact_means_for_arm(const Instance& instance, const ExposureContext& ctx,
                         const ExposureSuperArm& s, std::vector<double>& out) {
  const std::size_t n = instance.num_units();
  out.assign(n, 0.0);
  switch (instance.outcome().variant) {
    case OutcomeVariant::ExposureFaithful: {
      for (std::size_t i = 0; i < n; ++i)
        out[i] =
            instance.outcome().unit_label_means[i][static_cast<std::size_t>(s.labels[i])];
      return true;
    }
    case OutcomeVariant::NeedleInstance: {
      const ExposureSuperArm target_profile = ctx.exposure_profile(instance.outcome().target);
      if (target_profile == s) {
        const long double count = ctx.compatible_count(s);
        const double y = static_cast<double>(instance.outcome().gap / count);
        out.assign(n, y);
      }
      return true;
    }
    case OutcomeVariant::DenseTable: {
      long double count = ctx.compatible_count(s);
      if (count > static_cast<long double>(ctx.budget())) return false;
      const auto compat = ctx.compatible_super_arms(s);
      std::vector<long double> acc(n, 0.0L);
      for (const auto& a : compat)
        for (std::size_t i = 0; i < n; ++i) acc[i] += instance.mean_outcome(i, a);
      for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<double>(acc[i] / static_cast<long double>(compat.size()));
      return true;
    }
  }
  throw std::logic_error("oracle: unknown outcome variant");
}

void mc_means_for_arm(const Instance& instance, const ExposureContext& ctx,
                      const ExposureSuperArm& s, const OracleOptions& opts, std::uint64_t arm_tag,
                      std::vector<double>& out) {
  const std::size_t n = instance.num_units();
  Rng rng(child_seed(opts.mc_seed, arm_tag));
  std::vector<long double> acc(n, 0.0L);
  SuperArm a;
  for (std::uint64_t d = 0; d < opts.mc_samples; ++d) {
    ctx.sample_compatible_into(s, rng, a);
    for (std::size_t i = 0; i < n; ++i) acc[i] += instance.mean_outcome(i, a);
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<double>(acc[i] / static_cast<long double>(opts.mc_samples));
}

}  // namespace

double exposure_mean(const Instance& instance, const ExposureContext& ctx, std::size_t unit,
                     const ExposureSuperArm& s, const OracleOptions& opts) {
  if (unit >= instance.num_units()) throw std::out_of_range("oracle: unit out of range");
  std::vector<double> means;
  if (exact_means_for_arm(instance, ctx, s, means)) return means[unit];
  if (!opts.allow_monte_carlo)
    throw std::runtime_error("oracle: compatible set exceeds budget in exact mode");
  mc_means_for_arm(instance, ctx, s, opts, 0, means);
  return means[unit];
}

OracleReport compute_oracle_report(const Instance& instance, const ExposureContext& ctx,
                                   const ExposureArmSpace& space, const OracleOptions& opts) {
  const std::size_t n = instance.num_units();
  const std::size_t m = space.size();
  OracleReport report;
  report.exposure_means.resize(m);
  report.averaged_means.resize(m);
  bool used_mc = false;
  for (std::size_t idx = 0; idx < m; ++idx) {
    if (!exact_means_for_arm(instance, ctx, space.arm(idx), report.exposure_means[idx])) {
      if (!opts.allow_monte_carlo)
        throw std::runtime_error("oracle: compatible set exceeds budget in exact mode");
      mc_means_for_arm(instance, ctx, space.arm(idx), opts, idx, report.exposure_means[idx]);
      used_mc = true;
    }
    long double acc = 0.0L;
    for (double y : report.exposure_means[idx]) acc += y;
    report.averaged_means[idx] = static_cast<double>(acc / static_cast<long double>(n));
  }
  report.method = used_mc ? OracleMethod::MonteCarlo : OracleMethod::Exact;
  if (used_mc) {
    report.mc_samples = opts.mc_samples;
    report.mc_seed = opts.mc_seed;
  }

  report.best_arm_index = 0;
  for (std::size_t idx = 1; idx < m; ++idx)
    if (report.averaged_means[idx] > report.averaged_means[report.best_arm_index])
      report.best_arm_index = idx;

  report.ate_matrix.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      report.ate_matrix[i][j] = report.averaged_means[i] - report.averaged_means[j];

  report.regret_increments.resize(m);
  for (std::size_t idx = 0; idx < m; ++idx)
    report.regret_increments[idx] =
        report.averaged_means[report.best_arm_index] - report.averaged_means[idx];
  return report;
}

std::size_t best_exposure_arm(const OracleReport& report) { return report.best_arm_index; }

double true_ate(const OracleReport& report, std::size_t arm_i, std::size_t arm_j) {
  return report.ate_matrix.at(arm_i).at(arm_j);
}

double regret_increment(const OracleReport& report, std::size_t chosen_arm) {
  return report.regret_increments.at(chosen_arm);
}

}  // namespace netbandit
