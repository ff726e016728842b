#include "netbandit/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netbandit {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double DriftSchedule::value_at(std::int64_t t) const {
  if (t < 1) throw std::invalid_argument("drift: rounds start at t = 1");
  switch (variant) {
    case DriftVariant::None:
      return 0.0;
    case DriftVariant::Constant:
      return value;
    case DriftVariant::Sinusoidal:
      return amplitude * std::sin(kTwoPi * static_cast<double>(t) / period);
    case DriftVariant::Table:
      if (static_cast<std::size_t>(t - 1) >= values.size())
        throw std::invalid_argument("drift: round past end of drift table");
      return values[static_cast<std::size_t>(t - 1)];
  }
  throw std::logic_error("drift: unknown variant");
}

double DriftSchedule::min_value() const {
  switch (variant) {
    case DriftVariant::None:
      return 0.0;
    case DriftVariant::Constant:
      return value;
    case DriftVariant::Sinusoidal:
      return -std::fabs(amplitude);
    case DriftVariant::Table:
      return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
  }
  throw std::logic_error("drift: unknown variant");
}

double DriftSchedule::max_value() const {
  switch (variant) {
    case DriftVariant::None:
      return 0.0;
    case DriftVariant::Constant:
      return value;
    case DriftVariant::Sinusoidal:
      return std::fabs(amplitude);
    case DriftVariant::Table:
      return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  }
  throw std::logic_error("drift: unknown variant");
}

Instance::Instance(OutcomeModel outcome, NoiseModel noise, DriftSchedule drift, std::size_t n,
                   int k, AdjacencyMatrix network, Clustering clustering,
                   std::shared_ptr<const ExposureContext> exposure)
    : outcome_(std::move(outcome)),
      noise_(std::move(noise)),
      drift_(std::move(drift)),
      n_(n),
      k_(k),
      network_(std::move(network)),
      clustering_(std::move(clustering)),
      exposure_(std::move(exposure)) {
  validate();
}

void Instance::validate() {
  if (n_ == 0) throw std::invalid_argument("instance: no units");
  if (k_ < 2) throw std::invalid_argument("instance: need at least 2 arms");
  if (network_.size() != n_) throw std::invalid_argument("instance: network dimension mismatch");
  if (clustering_.num_units() != n_)
    throw std::invalid_argument("instance: clustering dimension mismatch");
  if (noise_.variant == NoiseVariant::Gaussian &&
      (!std::isfinite(noise_.sigma) || noise_.sigma < 0.0))
    throw std::invalid_argument("instance: negative noise scale");
  if (drift_.variant == DriftVariant::Sinusoidal && !(drift_.period > 0.0))
    throw std::invalid_argument("instance: sinusoidal drift needs a positive period");

  // Mean range: [0,1] in general, [-1,1] under Rademacher rewards.
  const double lo = noise_.variant == NoiseVariant::Rademacher ? -1.0 : 0.0;
  const double hi = 1.0;
  y_min_ = hi;
  y_max_ = lo;
  auto check = [&](double y) {
    if (!std::isfinite(y) || y < lo || y > hi)
      throw std::invalid_argument("instance: mean outcome outside allowed range");
    y_min_ = std::min(y_min_, y);
    y_max_ = std::max(y_max_, y);
  };
  switch (outcome_.variant) {
    case OutcomeVariant::DenseTable: {
      if (outcome_.table.empty()) throw std::invalid_argument("instance: empty outcome table");
      if (outcome_.table.size() > kDefaultEnumerationBudget)
        throw std::invalid_argument("instance: outcome table exceeds enumeration budget");
      for (const auto& [arm, means] : outcome_.table) {
        if (arm.size() != n_ || means.size() != n_)
          throw std::invalid_argument("instance: outcome table dimension mismatch");
        for (int v : arm.actions)
          if (v < 0 || v >= k_) throw std::invalid_argument("instance: table arm out of range");
        for (double y : means) check(y);
      }
      break;
    }
    case OutcomeVariant::ExposureFaithful: {
      if (!exposure_)
        throw std::invalid_argument("instance: exposure-faithful outcome needs a mapping context");
      if (outcome_.unit_label_means.size() != n_)
        throw std::invalid_argument("instance: outcome matrix has wrong unit count");
      for (const auto& row : outcome_.unit_label_means) {
        if (row.size() != exposure_->codomain().size())
          throw std::invalid_argument("instance: outcome matrix has wrong label count");
        for (double y : row) check(y);
      }
      break;
    }
    case OutcomeVariant::NeedleInstance: {
      if (!(outcome_.gap >= 0.0 && outcome_.gap <= 0.5))
        throw std::invalid_argument("instance: needle gap must lie in [0, 1/2]");
      if (outcome_.target.size() != n_)
        throw std::invalid_argument("instance: needle target dimension mismatch");
      for (int v : outcome_.target.actions)
        if (v < 0 || v >= k_) throw std::invalid_argument("instance: needle target out of range");
      check(0.0);
      check(outcome_.gap);
      break;
    }
  }

  if (drift_.variant != DriftVariant::None) {
    const bool bounded = noise_.variant == NoiseVariant::BoundedBernoulli ||
                         (noise_.variant == NoiseVariant::Gaussian && noise_.sigma == 0.0);
    if (!bounded)
      throw std::invalid_argument(
          "instance: drift requires noise that keeps rewards in [0,1] "
          "(BoundedBernoulli, or Gaussian with sigma = 0)");
    if (y_min_ + drift_.min_value() < 0.0 || y_max_ + drift_.max_value() > 1.0)
      throw std::invalid_argument("instance: drift can push rewards outside [0,1]");
  }
}

double Instance::mean_outcome(std::size_t unit, const SuperArm& a) const {
  if (unit >= n_) throw std::out_of_range("instance: unit out of range");
  if (a.size() != n_) throw std::invalid_argument("instance: super arm dimension mismatch");
  switch (outcome_.variant) {
    case OutcomeVariant::DenseTable: {
      auto it = outcome_.table.find(a);
      if (it == outcome_.table.end())
        throw std::invalid_argument("instance: super arm missing from outcome table");
      return it->second[unit];
    }
    case OutcomeVariant::ExposureFaithful: {
      const std::size_t idx = exposure_->label_index(exposure_->apply(unit, a));
      return outcome_.unit_label_means[unit][idx];
    }
    case OutcomeVariant::NeedleInstance:
      return a == outcome_.target ? outcome_.gap : 0.0;
  }
  throw std::logic_error("instance: unknown outcome variant");
}

void Instance::means_into(const SuperArm& a, const ExposureSuperArm* s,
                          std::vector<double>& out) const {
  out.resize(n_);
  switch (outcome_.variant) {
    case OutcomeVariant::DenseTable: {
      auto it = outcome_.table.find(a);
      if (it == outcome_.table.end())
        throw std::invalid_argument("instance: super arm missing from outcome table");
      std::copy(it->second.begin(), it->second.end(), out.begin());
      return;
    }
    case OutcomeVariant::ExposureFaithful: {
      if (s != nullptr) {
        for (std::size_t i = 0; i < n_; ++i)
          out[i] = outcome_.unit_label_means[i][static_cast<std::size_t>(s->labels[i])];
      } else {
        for (std::size_t i = 0; i < n_; ++i)
          out[i] =
              outcome_.unit_label_means[i][exposure_->label_index(exposure_->apply(i, a))];
      }
      return;
    }
    case OutcomeVariant::NeedleInstance: {
      const double y = a == outcome_.target ? outcome_.gap : 0.0;
      std::fill(out.begin(), out.end(), y);
      return;
    }
  }
}

void Instance::add_noise(std::int64_t t, Rng& rng, std::vector<double>& out) const {
  const double f = drift_.value_at(t);
  switch (noise_.variant) {
    case NoiseVariant::Gaussian:
      for (double& r : out) r = r + f + noise_.sigma * rng.normal();
      return;
    case NoiseVariant::BoundedBernoulli:
      for (double& r : out) {
        const double p = r + f;
        if (p < 0.0 || p > 1.0)
          throw std::invalid_argument("instance: Bernoulli mean outside [0,1]");
        r = rng.bernoulli(p) ? 1.0 : 0.0;
      }
      return;
    case NoiseVariant::Rademacher:
      for (double& r : out) r = rng.rademacher(r + f);
      return;
  }
}

std::vector<double> Instance::pull(const SuperArm& a, std::int64_t t, Rng& rng) const {
  std::vector<double> out;
  pull_into(a, t, rng, out);
  return out;
}

void Instance::pull_into(const SuperArm& a, std::int64_t t, Rng& rng,
                         std::vector<double>& out) const {
  if (a.size() != n_) throw std::invalid_argument("instance: super arm dimension mismatch");
  means_into(a, nullptr, out);
  add_noise(t, rng, out);
}

void Instance::pull_with_profile_into(const SuperArm& a, const ExposureSuperArm& s, std::int64_t t,
                                      Rng& rng, std::vector<double>& out) const {
  if (a.size() != n_) throw std::invalid_argument("instance: super arm dimension mismatch");
  means_into(a, &s, out);
  add_noise(t, rng, out);
}

Instance make_needle_instance(std::size_t n, int k, double gap, SuperArm target,
                              NoiseModel noise) {
  OutcomeModel outcome;
  outcome.variant = OutcomeVariant::NeedleInstance;
  outcome.gap = gap;
  outcome.target = std::move(target);
  return Instance(std::move(outcome), std::move(noise), DriftSchedule{}, n, k,
                  AdjacencyMatrix(n), Clustering::singletons(n));
}

double hard_instance_gap(double num_arms, std::int64_t horizon, std::size_t n) {
  if (num_arms < 1.0 || horizon < 1 || n == 0)
    throw std::invalid_argument("hard_instance_gap: bad parameters");
  const double g = std::sqrt((num_arms - 1.0) /
                             (4.0 * static_cast<double>(horizon) * static_cast<double>(n)));
  return std::min(g, 0.5);
}

std::pair<Instance, Instance> make_rademacher_pair(
    const std::vector<std::vector<double>>& base_unit_label_means, const ExposureSuperArm& s_target,
    double alpha, const std::shared_ptr<const ExposureContext>& exposure) {
  if (!exposure) throw std::invalid_argument("rademacher pair: missing mapping context");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("rademacher pair: alpha must lie in [0,1]");
  const std::size_t n = exposure->num_units();
  const int k = exposure->num_arms();

  OutcomeModel base;
  base.variant = OutcomeVariant::ExposureFaithful;
  base.unit_label_means = base_unit_label_means;
  NoiseModel rad;
  rad.variant = NoiseVariant::Rademacher;
  Instance first(std::move(base), rad, DriftSchedule{}, n, k, exposure->network(),
                 exposure->clustering(), exposure);

  // Second instance: dense table over all K^N arms, shifted by -alpha exactly
  // on the arms compatible with s_target.
  bool sat = false;
  const std::uint64_t total = saturating_pow(static_cast<std::uint64_t>(k), n, sat);
  if (sat || total > kDefaultEnumerationBudget)
    throw std::invalid_argument("rademacher pair: arm space exceeds enumeration budget");
  OutcomeModel shifted;
  shifted.variant = OutcomeVariant::DenseTable;
  SuperArm arm;
  arm.actions.assign(n, 0);
  bool done = false;
  while (!done) {
    const ExposureSuperArm profile = exposure->exposure_profile(arm);
    const bool hit = profile == s_target;
    std::vector<double> means(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(profile.labels[i]);
      const double y = base_unit_label_means.at(i).at(idx) - (hit ? alpha : 0.0);
      if (y < -1.0)
        throw std::invalid_argument("rademacher pair: shifted mean below -1");
      means[i] = y;
    }
    shifted.table.emplace(arm, std::move(means));
    std::size_t p = n;
    done = true;
    while (p > 0) {
      --p;
      if (arm.actions[p] + 1 < k) {
        arm.actions[p] += 1;
        std::fill(arm.actions.begin() + static_cast<std::ptrdiff_t>(p) + 1, arm.actions.end(), 0);
        done = false;
        break;
      }
    }
  }
  Instance second(std::move(shifted), rad, DriftSchedule{}, n, k, exposure->network(),
                  exposure->clustering(), exposure);
  return {std::move(first), std::move(second)};
}

double aggregate_variance_proxy(const Instance& instance, bool one_to_one) {
  const double n = static_cast<double>(instance.num_units());
  return 1.0 / n + (one_to_one ? 0.0 : 0.25);
}

}  // namespace netbandit
