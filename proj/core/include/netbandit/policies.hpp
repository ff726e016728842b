#pragma once

// Sequential policies over the exposure arm space.
//
// Two-phase UCB (ucb_tsn): phase 1 plays arms round-robin for T1 rounds and
// freezes a mean-difference ATE snapshot; phase 2 plays
// argmax R_hat(S) + sqrt(bonus_c * log(1/delta) / N_S).
//
// Two-phase EXP3 (exp3_tsn): phase 1 samples uniformly while accumulating
// optimistic IPW scores, freezes the IPW ATE snapshot at T1 and resets the
// scores; phase 2 samples from softmax(epsilon * scores).
//
// Baselines: uniform (uniform arm every round, snapshot at its T1, default T),
// ucb and exp3 (the same machinery with T1 forced to 0, no snapshot).

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "netbandit/estimators.hpp"
#include "netbandit/rng.hpp"

namespace netbandit {

struct UcbTsnState {
  std::int64_t t = 0;   // completed rounds
  std::int64_t t1 = 0;
  std::int64_t horizon = 0;
  double delta = 0.0;
  double bonus_c = 9.0;
  std::vector<std::int64_t> counts;
  std::vector<double> means;
  std::size_t round_robin_cursor = 0;
  std::optional<AteEstimate> ate_snapshot;
};

UcbTsnState make_ucb_tsn_state(std::size_t num_arms, std::int64_t horizon, std::int64_t t1,
                               double delta, double bonus_c);
std::size_t ucb_tsn_choose(const UcbTsnState& state);
void ucb_tsn_update(UcbTsnState& state, std::size_t arm, double reward_bar);
double ucb_value(const UcbTsnState& state, std::size_t arm);

struct Exp3TsnState {
  std::int64_t t = 0;
  std::int64_t t1 = 0;
  std::int64_t horizon = 0;
  double epsilon = 0.0;
  std::vector<double> scores;
  std::vector<double> probs;  // pi for the round being played, set by choose
  std::optional<AteEstimate> ate_snapshot;
};

Exp3TsnState make_exp3_tsn_state(std::size_t num_arms, std::int64_t horizon, std::int64_t t1,
                                 double epsilon);
std::size_t exp3_tsn_choose(Exp3TsnState& state, Rng& rng);
void exp3_tsn_update(Exp3TsnState& state, std::size_t chosen, double reward_bar);

struct UniformPolicyState {
  std::int64_t t = 0;
  std::int64_t t1 = 0;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> counts;
  std::vector<double> means;
  std::optional<AteEstimate> ate_snapshot;
};

std::size_t uniform_choose(const UniformPolicyState& state, Rng& rng);
void uniform_update(UniformPolicyState& state, std::size_t arm, double reward_bar);

enum class PolicyName { UcbTsn, Exp3Tsn, Uniform, Ucb, Exp3 };

struct PolicySpec {
  PolicyName name = PolicyName::UcbTsn;
  std::int64_t horizon = 0;                 // T
  std::optional<std::int64_t> t1;           // default: ceil(sqrt(|U_E| T)); 0 for baselines
  std::optional<double> delta;              // default 1/T^2
  std::optional<double> bonus_c;            // default 9
  std::optional<double> epsilon;            // default sqrt(log|U_E| / (|U_E| T))
};

std::int64_t resolve_t1(const PolicySpec& spec, std::size_t num_arms);
const char* policy_name_string(PolicyName name);
PolicyName parse_policy_name(const std::string& name);

// Uniform run-confined wrapper used by the harness; dispatches to the state
// machines above with defaults resolved.
class Policy {
 public:
  Policy(const PolicySpec& spec, std::size_t num_arms);

  std::size_t choose(Rng& rng);
  void update(std::size_t arm, double reward_bar);
  const std::optional<AteEstimate>& ate_snapshot() const;
  std::int64_t t1() const { return t1_; }

 private:
  std::int64_t t1_ = 0;
  std::variant<UcbTsnState, Exp3TsnState, UniformPolicyState> state_;
};

}  // namespace netbandit
