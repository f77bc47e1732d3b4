#pragma once

#include <string>
#include <vector>

#include "tvmdp/rational.hpp"

namespace tvmdp {

/// One action available in a state: an exact reward and an exact transition
/// distribution over all states (dense row, sums to exactly 1).
struct ActionSpec {
    std::string name;
    Rational reward;
    std::vector<Rational> next;
};

/// Finite MDP with exact rational rewards and transition probabilities.
/// Immutable after construction; float mirrors of all entries are cached for
/// the numeric solvers.
class Mdp {
public:
    /// Validates all invariants: nonempty action sets, rows summing to
    /// exactly 1 with nonnegative entries, start state in range. Throws
    /// std::invalid_argument with a field-level message otherwise.
    Mdp(std::vector<std::string> states, std::vector<std::vector<ActionSpec>> actions, int start_state);

    int num_states() const { return static_cast<int>(states_.size()); }
    int start_state() const { return start_; }
    const std::vector<std::string>& state_names() const { return states_; }
    const std::string& state_name(int s) const { return states_[static_cast<std::size_t>(s)]; }
    const std::vector<ActionSpec>& actions(int s) const { return actions_[static_cast<std::size_t>(s)]; }
    const ActionSpec& action(int s, int a) const { return actions_[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]; }
    int num_actions(int s) const { return static_cast<int>(actions_[static_cast<std::size_t>(s)].size()); }

    /// Total number of (state, action) pairs.
    int total_action_count() const { return total_actions_; }
    /// Number of distinct action names (the union of the per-state sets).
    int distinct_action_count() const { return distinct_actions_; }

    /// M: the largest absolute reward.
    const Rational& reward_bound() const { return reward_bound_; }
    /// b: the largest bit size of any reward or probability entry.
    std::size_t max_entry_bits() const { return max_entry_bits_; }

    /// -1 when the name is unknown.
    int state_index(const std::string& name) const;
    int action_index(int s, const std::string& name) const;

    double reward_d(int s, int a) const { return rewards_d_[offset(s, a)]; }
    const std::vector<double>& next_d(int s, int a) const { return next_d_[offset(s, a)]; }

private:
    std::size_t offset(int s, int a) const { return action_offsets_[static_cast<std::size_t>(s)] + static_cast<std::size_t>(a); }

    std::vector<std::string> states_;
    std::vector<std::vector<ActionSpec>> actions_;
    int start_ = 0;
    int total_actions_ = 0;
    int distinct_actions_ = 0;
    Rational reward_bound_;
    std::size_t max_entry_bits_ = 1;
    std::vector<std::size_t> action_offsets_;
    std::vector<double> rewards_d_;
    std::vector<std::vector<double>> next_d_;
};

/// Deterministic state -> action-index map, total over states.
struct StaticPolicy {
    std::vector<int> choice;

    bool operator==(const StaticPolicy& o) const = default;
    int operator()(int s) const { return choice[static_cast<std::size_t>(s)]; }
};

/// Eventually constant sequence of static policies: entries 0..T-1 from the
/// prefix, the constant tail from step T onward.
struct DynamicPolicy {
    std::vector<StaticPolicy> prefix;
    StaticPolicy tail;

    std::size_t switch_time() const { return prefix.size(); }
    const StaticPolicy& at(std::size_t t) const { return t < prefix.size() ? prefix[t] : tail; }
};

/// Checks that the policy picks a valid action index in every state.
bool policy_valid(const Mdp& mdp, const StaticPolicy& policy);

/// Throws std::invalid_argument when invalid.
void require_policy_valid(const Mdp& mdp, const StaticPolicy& policy, const char* what);

}  // namespace tvmdp
