#include "tvmdp/reduction.hpp"

#include <stdexcept>

#include "tvmdp/solvers.hpp"
#include "tvmdp/spe.hpp"
#include "tvmdp/verifier.hpp"

namespace tvmdp {

namespace {

std::string fresh_name(std::string base, const std::vector<std::string>& taken) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "*";
    return base;
}

const DownStepDiscount& down_step_of(const SpeStartInstance& instance) {
    const auto* d = std::get_if<DownStepDiscount>(&instance.discount.data());
    if (!d) throw std::invalid_argument("gadget instance must carry a down-step discount");
    return *d;
}

// The forced behavior of fully myopic players: exit from every original
// state (largest immediate reward), the single actions elsewhere.
StaticPolicy myopic_policy(const SpeStartInstance& instance) {
    StaticPolicy pi{std::vector<int>(static_cast<std::size_t>(instance.mdp.num_states()), 0)};
    for (int s = 0; s < instance.original_state_count; ++s)
        pi.choice[static_cast<std::size_t>(s)] = instance.mdp.num_actions(s) - 1;  // exit appended last
    return pi;
}

}  // namespace

SpeStartInstance build_gadget(const Mdp& mdp, const Rational& gamma, const BigInt& horizon, int flagged_action) {
    if (gamma <= 0 || gamma >= 1)
        throw std::invalid_argument("build_gadget: gamma must lie in (0,1); the exit penalty divides by gamma");
    if (horizon < 1) throw std::invalid_argument("build_gadget: horizon must be >= 1");
    if (flagged_action < 0 || flagged_action >= mdp.num_actions(mdp.start_state()))
        throw std::invalid_argument("build_gadget: flagged action not available in the start state");

    const int n = mdp.num_states();
    const Rational big = mdp.reward_bound() / (1 - gamma) + 1;  // U + 1

    std::vector<std::string> states = mdp.state_names();
    const std::string exit_state = fresh_name("s*", states);
    states.push_back(exit_state);
    const std::string sink_state = fresh_name("s**", states);
    states.push_back(sink_state);
    const int exit_index = n;
    const int sink_index = n + 1;

    std::vector<std::vector<ActionSpec>> actions(static_cast<std::size_t>(n) + 2);
    for (int s = 0; s < n; ++s) {
        std::vector<std::string> taken;
        for (const auto& act : mdp.actions(s)) taken.push_back(act.name);
        for (const auto& act : mdp.actions(s)) {
            ActionSpec widened = act;
            widened.next.resize(static_cast<std::size_t>(n) + 2, Rational(0));
            actions[static_cast<std::size_t>(s)].push_back(std::move(widened));
        }
        std::vector<Rational> to_exit(static_cast<std::size_t>(n) + 2, Rational(0));
        to_exit[static_cast<std::size_t>(exit_index)] = 1;
        actions[static_cast<std::size_t>(s)].push_back(ActionSpec{fresh_name("a*", taken), big, std::move(to_exit)});
    }
    std::vector<Rational> to_sink(static_cast<std::size_t>(n) + 2, Rational(0));
    to_sink[static_cast<std::size_t>(sink_index)] = 1;
    actions[static_cast<std::size_t>(exit_index)].push_back(ActionSpec{"a**", Rational(-2) * big / gamma, std::move(to_sink)});
    std::vector<Rational> stay(static_cast<std::size_t>(n) + 2, Rational(0));
    stay[static_cast<std::size_t>(sink_index)] = 1;
    actions[static_cast<std::size_t>(sink_index)].push_back(ActionSpec{"stay", Rational(0), std::move(stay)});

    SpeStartInstance out{Mdp(std::move(states), std::move(actions), mdp.start_state()),
                         DiscountFunction::down_step(gamma, horizon - 1), flagged_action, n};
    return out;
}

bool answer_spe_start(const SpeStartInstance& instance, SpeStartMethod method, std::uint64_t horizon_cap) {
    const auto& ds = down_step_of(instance);
    const BigInt switch_time = ds.step + 1;  // first myopic player
    const StaticPolicy myopic = myopic_policy(instance);

    if (method == SpeStartMethod::constructed) {
        DynamicPolicy dp = construct_with_tail<Rational>(instance.mdp, instance.discount, myopic, switch_time,
                                                         nullptr, horizon_cap);
        const StaticPolicy& first = dp.prefix.empty() ? dp.tail : dp.prefix.front();
        return first(instance.mdp.start_state()) == instance.flagged_action;
    }

    if (switch_time > BigInt(static_cast<unsigned long>(horizon_cap)))
        throw HorizonCapExceeded("answer_spe_start: switch time " + switch_time.get_str() +
                                 " exceeds the horizon cap " + std::to_string(horizon_cap));
    const std::size_t T = static_cast<std::size_t>(switch_time.get_ui());
    const Mdp& mdp = instance.mdp;

    // All discounting players share the same factor, so every equilibrium
    // continuation has the same (maximal) value table: the backward pass is
    // unique and the full argmax set at time 0 enumerates every equilibrium
    // start action.
    ValueTable<Rational> v = evaluate_policy<Rational>(mdp, myopic, ds.gamma);
    QTable<Rational> q;
    std::vector<StaticPolicy> greedy_prefix(T, StaticPolicy{std::vector<int>(static_cast<std::size_t>(mdp.num_states()), 0)});
    for (std::size_t back = 0; back < T; ++back) {
        const std::size_t t = T - 1 - back;
        q = q_from_values(mdp, v, ds.gamma);
        for (int s = 0; s < mdp.num_states(); ++s) {
            const auto& row = q[static_cast<std::size_t>(s)];
            Rational best = row[0];
            int best_a = 0;
            for (std::size_t a = 1; a < row.size(); ++a)
                if (row[a] > best) {
                    best = row[a];
                    best_a = static_cast<int>(a);
                }
            greedy_prefix[t].choice[static_cast<std::size_t>(s)] = best_a;
            v[static_cast<std::size_t>(s)] = best;
        }
    }

    std::vector<int> start_actions;
    const auto& row = q[static_cast<std::size_t>(mdp.start_state())];
    Rational best = row[0];
    for (const auto& val : row)
        if (val > best) best = val;
    for (std::size_t a = 0; a < row.size(); ++a)
        if (row[a] == best) start_actions.push_back(static_cast<int>(a));

    // Re-certify through the independent verifier: each reported start
    // action extends to a full equilibrium.
    for (int a : start_actions) {
        DynamicPolicy dp{greedy_prefix, myopic};
        if (!dp.prefix.empty()) dp.prefix.front().choice[static_cast<std::size_t>(mdp.start_state())] = a;
        VerifyOptions vo;
        vo.exact_arithmetic = true;
        vo.horizon_cap = horizon_cap;
        EquilibriumReport report = verify_equilibrium(mdp, instance.discount, dp, Rational(0), vo);
        if (!report.passed || !(*report.max_slack_exact == 0))
            throw std::logic_error("answer_spe_start: an enumerated equilibrium failed re-certification");
    }

    for (int a : start_actions)
        if (a == instance.flagged_action) return true;
    return false;
}

DominanceReport check_gadget_dominance(const SpeStartInstance& instance, std::uint64_t horizon_cap) {
    const auto& ds = down_step_of(instance);
    const BigInt switch_time = ds.step + 1;
    if (switch_time > BigInt(static_cast<unsigned long>(horizon_cap)))
        throw HorizonCapExceeded("check_gadget_dominance: switch time exceeds the horizon cap");
    const std::size_t T = static_cast<std::size_t>(switch_time.get_ui());
    const Mdp& mdp = instance.mdp;
    const StaticPolicy myopic = myopic_policy(instance);

    DominanceReport report;
    report.exit_dominated_for_discounting_players = true;
    report.exit_dominant_for_first_myopic_player = true;
    bool have_slack = false;

    // First myopic player: exit must strictly beat every original action on
    // immediate reward.
    for (int s = 0; s < instance.original_state_count; ++s) {
        const int exit_a = mdp.num_actions(s) - 1;
        for (int a = 0; a < exit_a; ++a)
            if (!(mdp.action(s, exit_a).reward > mdp.action(s, a).reward))
                report.exit_dominant_for_first_myopic_player = false;
    }

    // Discounting players: exit must be strictly worse than the best
    // alternative at every original state.
    ValueTable<Rational> v = evaluate_policy<Rational>(mdp, myopic, ds.gamma);
    for (std::size_t back = 0; back < T; ++back) {
        QTable<Rational> q = q_from_values(mdp, v, ds.gamma);
        for (int s = 0; s < mdp.num_states(); ++s) {
            const auto& row = q[static_cast<std::size_t>(s)];
            Rational best = row[0];
            for (const auto& val : row)
                if (val > best) best = val;
            if (s < instance.original_state_count) {
                const int exit_a = mdp.num_actions(s) - 1;
                Rational slack = best - row[static_cast<std::size_t>(exit_a)];
                if (slack <= 0) report.exit_dominated_for_discounting_players = false;
                if (!have_slack || slack < report.min_exit_slack_discounting_players) {
                    report.min_exit_slack_discounting_players = slack;
                    have_slack = true;
                }
            }
            v[static_cast<std::size_t>(s)] = best;
        }
    }
    if (!have_slack) report.exit_dominated_for_discounting_players = false;
    return report;
}

}  // namespace tvmdp
