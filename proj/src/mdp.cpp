#include "tvmdp/mdp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tvmdp {

Mdp::Mdp(std::vector<std::string> states, std::vector<std::vector<ActionSpec>> actions, int start_state)
    : states_(std::move(states)), actions_(std::move(actions)), start_(start_state) {
    const int n = num_states();
    if (n == 0) throw std::invalid_argument("mdp: no states");
    if (static_cast<int>(actions_.size()) != n)
        throw std::invalid_argument("mdp: action table size does not match state count");
    if (start_ < 0 || start_ >= n) throw std::invalid_argument("mdp: start state out of range");
    {
        std::set<std::string> seen(states_.begin(), states_.end());
        if (static_cast<int>(seen.size()) != n) throw std::invalid_argument("mdp: duplicate state names");
    }

    std::set<std::string> names;
    reward_bound_ = 0;
    for (int s = 0; s < n; ++s) {
        if (actions_[static_cast<std::size_t>(s)].empty())
            throw std::invalid_argument("mdp: state '" + states_[static_cast<std::size_t>(s)] + "' has no actions");
        std::set<std::string> local;
        for (const auto& act : actions_[static_cast<std::size_t>(s)]) {
            if (!local.insert(act.name).second)
                throw std::invalid_argument("mdp: duplicate action name '" + act.name + "' in state '" +
                                            states_[static_cast<std::size_t>(s)] + "'");
            names.insert(act.name);
            if (static_cast<int>(act.next.size()) != n)
                throw std::invalid_argument("mdp: transition row of action '" + act.name + "' in state '" +
                                            states_[static_cast<std::size_t>(s)] + "' has wrong length");
            Rational row_sum(0);
            for (const auto& p : act.next) {
                if (p < 0)
                    throw std::invalid_argument("mdp: negative transition probability for action '" + act.name +
                                                "' in state '" + states_[static_cast<std::size_t>(s)] + "'");
                row_sum += p;
                max_entry_bits_ = std::max(max_entry_bits_, rational_bit_size(p));
            }
            if (row_sum != 1)
                throw std::invalid_argument("mdp: transition row of action '" + act.name + "' in state '" +
                                            states_[static_cast<std::size_t>(s)] +
                                            "' sums to " + rational_to_string(row_sum) + ", expected exactly 1");
            max_entry_bits_ = std::max(max_entry_bits_, rational_bit_size(act.reward));
            reward_bound_ = std::max(reward_bound_, Rational(abs(act.reward)));
            ++total_actions_;
        }
    }
    distinct_actions_ = static_cast<int>(names.size());

    action_offsets_.resize(static_cast<std::size_t>(n));
    std::size_t off = 0;
    for (int s = 0; s < n; ++s) {
        action_offsets_[static_cast<std::size_t>(s)] = off;
        off += actions_[static_cast<std::size_t>(s)].size();
    }
    rewards_d_.resize(off);
    next_d_.resize(off);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < num_actions(s); ++a) {
            const auto& act = action(s, a);
            rewards_d_[offset(s, a)] = to_double(act.reward);
            auto& row = next_d_[offset(s, a)];
            row.resize(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = to_double(act.next[static_cast<std::size_t>(j)]);
        }
    }
}

int Mdp::state_index(const std::string& name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    return it == states_.end() ? -1 : static_cast<int>(it - states_.begin());
}

int Mdp::action_index(int s, const std::string& name) const {
    const auto& acts = actions(s);
    for (std::size_t i = 0; i < acts.size(); ++i)
        if (acts[i].name == name) return static_cast<int>(i);
    return -1;
}

bool policy_valid(const Mdp& mdp, const StaticPolicy& policy) {
    if (static_cast<int>(policy.choice.size()) != mdp.num_states()) return false;
    for (int s = 0; s < mdp.num_states(); ++s)
        if (policy(s) < 0 || policy(s) >= mdp.num_actions(s)) return false;
    return true;
}

void require_policy_valid(const Mdp& mdp, const StaticPolicy& policy, const char* what) {
    if (!policy_valid(mdp, policy)) throw std::invalid_argument(std::string(what) + ": invalid policy for this mdp");
}

}  // namespace tvmdp
