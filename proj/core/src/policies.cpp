#include "netbandit/policies.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace netbandit {

UcbTsnState make_ucb_tsn_state(std::size_t num_arms, std::int64_t horizon, std::int64_t t1,
                               double delta, double bonus_c) {
  if (num_arms < 1) throw std::invalid_argument("ucb: empty arm space");
  if (horizon < 1) throw std::invalid_argument("ucb: horizon must be positive");
  if (t1 < 0 || t1 > horizon) throw std::invalid_argument("ucb: T1 must lie in [0, T]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ucb: delta must lie in (0,1)");
  if (!(bonus_c > 0.0)) throw std::invalid_argument("ucb: bonus constant must be positive");
  UcbTsnState s;
  s.t1 = t1;
  s.horizon = horizon;
  s.delta = delta;
  s.bonus_c = bonus_c;
  s.counts.assign(num_arms, 0);
  s.means.assign(num_arms, 0.0);
  return s;
}

std::size_t ucb_tsn_choose(const UcbTsnState& state) {
  const std::int64_t round = state.t + 1;
  if (round > state.horizon) throw std::logic_error("ucb: choose called past horizon");
  if (round <= state.t1) return state.round_robin_cursor;
  // Zero-count arms only occur when T1 < |U_E| (baseline use); play them first.
  for (std::size_t i = 0; i < state.counts.size(); ++i)
    if (state.counts[i] == 0) return i;
  std::size_t best = 0;
  double best_value = ucb_value(state, 0);
  for (std::size_t i = 1; i < state.counts.size(); ++i) {
    const double v = ucb_value(state, i);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

void ucb_tsn_update(UcbTsnState& state, std::size_t arm, double reward_bar) {
  if (arm >= state.counts.size()) throw std::out_of_range("ucb: arm out of range");
  if (!std::isfinite(reward_bar)) throw std::invalid_argument("ucb: non-finite reward");
  state.counts[arm] += 1;
  state.means[arm] += (reward_bar - state.means[arm]) / static_cast<double>(state.counts[arm]);
  state.t += 1;
  if (state.t <= state.t1)
    state.round_robin_cursor = (state.round_robin_cursor + 1) % state.counts.size();
  if (state.t == state.t1)
    state.ate_snapshot = mean_diff_ate(state.means, state.counts, state.t1);
}

double ucb_value(const UcbTsnState& state, std::size_t arm) {
  if (arm >= state.counts.size()) throw std::out_of_range("ucb: arm out of range");
  if (state.counts[arm] < 1) throw std::invalid_argument("ucb: value queried for unpulled arm");
  const double bonus =
      std::sqrt(state.bonus_c * std::log(1.0 / state.delta) / static_cast<double>(state.counts[arm]));
  return state.means[arm] + bonus;
}

Exp3TsnState make_exp3_tsn_state(std::size_t num_arms, std::int64_t horizon, std::int64_t t1,
                                 double epsilon) {
  if (num_arms < 1) throw std::invalid_argument("exp3: empty arm space");
  if (horizon < 1) throw std::invalid_argument("exp3: horizon must be positive");
  if (t1 < 0 || t1 > horizon) throw std::invalid_argument("exp3: T1 must lie in [0, T]");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("exp3: negative learning rate");
  Exp3TsnState s;
  s.t1 = t1;
  s.horizon = horizon;
  s.epsilon = epsilon;
  s.scores.assign(num_arms, 0.0);
  return s;
}

std::size_t exp3_tsn_choose(Exp3TsnState& state, Rng& rng) {
  const std::int64_t round = state.t + 1;
  if (round > state.horizon) throw std::logic_error("exp3: choose called past horizon");
  const std::size_t m = state.scores.size();
  state.probs.assign(m, 0.0);
  if (round <= state.t1) {
    const double u = 1.0 / static_cast<double>(m);
    state.probs.assign(m, u);
  } else {
    // Softmax of epsilon * scores with max-shift.
    double shift = state.epsilon * state.scores[0];
    for (std::size_t i = 1; i < m; ++i) shift = std::max(shift, state.epsilon * state.scores[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      state.probs[i] = std::exp(state.epsilon * state.scores[i] - shift);
      total += state.probs[i];
    }
    for (std::size_t i = 0; i < m; ++i) state.probs[i] /= total;
  }
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    acc += state.probs[i];
    if (u < acc) return i;
  }
  return m - 1;
}

void exp3_tsn_update(Exp3TsnState& state, std::size_t chosen, double reward_bar) {
  if (chosen >= state.scores.size()) throw std::out_of_range("exp3: arm out of range");
  if (!(reward_bar >= 0.0 && reward_bar <= 1.0))
    throw std::invalid_argument("exp3: reward outside [0,1] breaks the bounded contract");
  const double pi = state.probs.at(chosen);
  if (!(pi > 0.0)) throw std::logic_error("exp3: update without a recorded probability");
  for (double& s : state.scores) s += 1.0;
  state.scores[chosen] -= (1.0 - reward_bar) / pi;
  state.t += 1;
  if (state.t == state.t1) {
    state.ate_snapshot = ipw_ate(state.scores, state.t1);
    std::fill(state.scores.begin(), state.scores.end(), 0.0);
  }
}

std::size_t uniform_choose(const UniformPolicyState& state, Rng& rng) {
  const std::int64_t round = state.t + 1;
  if (round > state.horizon) throw std::logic_error("uniform: choose called past horizon");
  return static_cast<std::size_t>(rng.uniform_int(state.counts.size()));
}

void uniform_update(UniformPolicyState& state, std::size_t arm, double reward_bar) {
  if (arm >= state.counts.size()) throw std::out_of_range("uniform: arm out of range");
  if (!std::isfinite(reward_bar)) throw std::invalid_argument("uniform: non-finite reward");
  state.counts[arm] += 1;
  state.means[arm] += (reward_bar - state.means[arm]) / static_cast<double>(state.counts[arm]);
  state.t += 1;
  if (state.t == state.t1) {
    bool covered = true;
    for (std::int64_t c : state.counts)
      if (c < 1) covered = false;
    if (covered) state.ate_snapshot = mean_diff_ate(state.means, state.counts, state.t1);
  }
}

std::int64_t resolve_t1(const PolicySpec& spec, std::size_t num_arms) {
  switch (spec.name) {
    case PolicyName::Ucb:
    case PolicyName::Exp3:
      return 0;
    case PolicyName::Uniform:
      return spec.t1.value_or(spec.horizon);
    case PolicyName::UcbTsn:
    case PolicyName::Exp3Tsn: {
      if (spec.t1) return *spec.t1;
      // ceil(sqrt(|U_E| * T)), exact via integer adjustment.
      const std::int64_t product = static_cast<std::int64_t>(num_arms) * spec.horizon;
      auto x = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(product))));
      while (x > 1 && (x - 1) * (x - 1) >= product) --x;
      while (x * x < product) ++x;
      return x;
    }
  }
  throw std::logic_error("policy: unknown name");
}

const char* policy_name_string(PolicyName name) {
  switch (name) {
    case PolicyName::UcbTsn:
      return "ucb_tsn";
    case PolicyName::Exp3Tsn:
      return "exp3_tsn";
    case PolicyName::Uniform:
      return "uniform";
    case PolicyName::Ucb:
      return "ucb";
    case PolicyName::Exp3:
      return "exp3";
  }
  return "unknown";
}

PolicyName parse_policy_name(const std::string& name) {
  if (name == "ucb_tsn") return PolicyName::UcbTsn;
  if (name == "exp3_tsn") return PolicyName::Exp3Tsn;
  if (name == "uniform") return PolicyName::Uniform;
  if (name == "ucb") return PolicyName::Ucb;
  if (name == "exp3") return PolicyName::Exp3;
  throw std::invalid_argument("policy: unknown name '" + name + "'");
}

Policy::Policy(const PolicySpec& spec, std::size_t num_arms) {
  if (spec.horizon < 1) throw std::invalid_argument("policy: horizon must be positive");
  t1_ = resolve_t1(spec, num_arms);
  const double delta =
      spec.delta.value_or(1.0 / (static_cast<double>(spec.horizon) * static_cast<double>(spec.horizon)));
  const double bonus_c = spec.bonus_c.value_or(9.0);
  const double m = static_cast<double>(num_arms);
  const double epsilon =
      spec.epsilon.value_or(std::sqrt(std::log(m) / (m * static_cast<double>(spec.horizon))));
  switch (spec.name) {
    case PolicyName::UcbTsn:
    case PolicyName::Ucb:
      state_ = make_ucb_tsn_state(num_arms, spec.horizon, t1_, delta, bonus_c);
      break;
    case PolicyName::Exp3Tsn:
    case PolicyName::Exp3:
      state_ = make_exp3_tsn_state(num_arms, spec.horizon, t1_, epsilon);
      break;
    case PolicyName::Uniform: {
      UniformPolicyState s;
      s.t1 = t1_;
      s.horizon = spec.horizon;
      s.counts.assign(num_arms, 0);
      s.means.assign(num_arms, 0.0);
      state_ = std::move(s);
      break;
    }
  }
}

std::size_t Policy::choose(Rng& rng) {
  if (auto* s = std::get_if<UcbTsnState>(&state_)) return ucb_tsn_choose(*s);
  if (auto* s = std::get_if<Exp3TsnState>(&state_)) return exp3_tsn_choose(*s, rng);
  return uniform_choose(std::get<UniformPolicyState>(state_), rng);
}

void Policy::update(std::size_t arm, double reward_bar) {
  if (auto* s = std::get_if<UcbTsnState>(&state_)) return ucb_tsn_update(*s, arm, reward_bar);
  if (auto* s = std::get_if<Exp3TsnState>(&state_)) return exp3_tsn_update(*s, arm, reward_bar);
  uniform_update(std::get<UniformPolicyState>(state_), arm, reward_bar);
}

const std::optional<AteEstimate>& Policy::ate_snapshot() const {
  if (auto* s = std::get_if<UcbTsnState>(&state_)) return s->ate_snapshot;
  if (auto* s = std::get_if<Exp3TsnState>(&state_)) return s->ate_snapshot;
  return std::get<UniformPolicyState>(state_).ate_snapshot;
}

}  // namespace netbandit
