#pragma once

// Bandit instances: potential outcomes Y_i(A), per-unit noise, and an optional
// round-indexed drift f_t added to every unit's mean. Rewards are
// r_{i,t}(A) = Y_i(A) + f_t + eta_{i,t}.
//
// Outcome variants:
//   DenseTable        explicit map A -> (Y_1(A), ..., Y_N(A)), budget-gated
//   ExposureFaithful  Y_i(A) = g_i(S(i, A, H)): depends on A only through the
//                     exposure label, stored as an N x d_s matrix
//   NeedleInstance    Y_i(A) = gap * 1{A = target}, gap in [0, 1/2]
//
// Mean ranges are validated to [0,1], relaxed to [-1,1] when the noise is
// Rademacher (the lower-bound construction shifts means negative). A non-None
// drift requires bounded rewards — BoundedBernoulli noise or noiseless
// (zero-sigma Gaussian) — and mean + drift must stay inside [0,1].

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "netbandit/exposure.hpp"
#include "netbandit/network.hpp"
#include "netbandit/rng.hpp"

namespace netbandit {

enum class OutcomeVariant { DenseTable, ExposureFaithful, NeedleInstance };

struct OutcomeModel {
  OutcomeVariant variant = OutcomeVariant::NeedleInstance;
  std::map<SuperArm, std::vector<double>> table;          // DenseTable
  std::vector<std::vector<double>> unit_label_means;      // ExposureFaithful, [unit][label index]
  double gap = 0.0;                                       // NeedleInstance
  SuperArm target;                                        // NeedleInstance
};

enum class NoiseVariant { Gaussian, BoundedBernoulli, Rademacher };

struct NoiseModel {
  NoiseVariant variant = NoiseVariant::Gaussian;
  double sigma = 1.0;  // Gaussian only
};

enum class DriftVariant { None, Constant, Sinusoidal, Table };

struct DriftSchedule {
  DriftVariant variant = DriftVariant::None;
  double value = 0.0;                // Constant
  double amplitude = 0.0;            // Sinusoidal
  double period = 1.0;               // Sinusoidal
  std::vector<double> values;        // Table, one entry per round starting at t=1

  double value_at(std::int64_t t) const;
  double min_value() const;
  double max_value() const;
};

class Instance {
 public:
  Instance(OutcomeModel outcome, NoiseModel noise, DriftSchedule drift, std::size_t n, int k,
           AdjacencyMatrix network, Clustering clustering,
           std::shared_ptr<const ExposureContext> exposure = nullptr);

  std::size_t num_units() const { return n_; }
  int num_arms() const { return k_; }
  const OutcomeModel& outcome() const { return outcome_; }
  const NoiseModel& noise() const { return noise_; }
  const DriftSchedule& drift() const { return drift_; }
  const AdjacencyMatrix& network() const { return network_; }
  const Clustering& clustering() const { return clustering_; }
  const std::shared_ptr<const ExposureContext>& exposure() const { return exposure_; }

  double mean_outcome(std::size_t unit, const SuperArm& a) const;
  double drift_value(std::int64_t t) const { return drift_.value_at(t); }

  std::vector<double> pull(const SuperArm& a, std::int64_t t, Rng& rng) const;
  void pull_into(const SuperArm& a, std::int64_t t, Rng& rng, std::vector<double>& out) const;
  // Same draw, but when the caller already knows exposure_profile(a) this
  // avoids recomputing labels for exposure-faithful outcomes.
  void pull_with_profile_into(const SuperArm& a, const ExposureSuperArm& s, std::int64_t t,
                              Rng& rng, std::vector<double>& out) const;

  double min_mean() const { return y_min_; }
  double max_mean() const { return y_max_; }

 private:
  void validate();
  void means_into(const SuperArm& a, const ExposureSuperArm* s, std::vector<double>& out) const;
  void add_noise(std::int64_t t, Rng& rng, std::vector<double>& out) const;

  OutcomeModel outcome_;
  NoiseModel noise_;
  DriftSchedule drift_;
  std::size_t n_ = 0;
  int k_ = 2;
  AdjacencyMatrix network_;
  Clustering clustering_;
  std::shared_ptr<const ExposureContext> exposure_;
  double y_min_ = 0.0;
  double y_max_ = 0.0;
};

// Needle instance on a zero network with singleton clusters: the target super
// arm has mean gap on every unit, everything else 0.
Instance make_needle_instance(std::size_t n, int k, double gap, SuperArm target, NoiseModel noise);

// gap = sqrt((num_arms - 1) / (4 T N)) capped at 1/2; with num_arms = K^N this
// is the hard-instance gap of the lower-bound construction, and with
// num_arms = |U_E| its exposure-space analogue.
double hard_instance_gap(double num_arms, std::int64_t horizon, std::size_t n);

// Two Rademacher-reward instances that agree everywhere except on super arms
// compatible with s_target, where the second one's means are shifted by
// -alpha. Their oracle ATEs between s_target and any other arm differ by
// exactly alpha.
std::pair<Instance, Instance> make_rademacher_pair(
    const std::vector<std::vector<double>>& base_unit_label_means, const ExposureSuperArm& s_target,
    double alpha, const std::shared_ptr<const ExposureContext>& exposure);

// Variance proxy of the unit-averaged exposure reward: 1/N when every exposure
// arm has a unique compatible super arm, else 1/N + 1/4.
double aggregate_variance_proxy(const Instance& instance, bool one_to_one);

}  // namespace netbandit
