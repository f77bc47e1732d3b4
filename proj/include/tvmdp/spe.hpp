#pragma once

#include <cstdint>
#include <optional>

#include "tvmdp/discount.hpp"
#include "tvmdp/errors.hpp"
#include "tvmdp/gamma_algebra.hpp"
#include "tvmdp/mdp.hpp"
#include "tvmdp/solvers.hpp"

namespace tvmdp {

/// Instrumentation for the backward-induction construction: one inner update
/// per (player, step, state, action) Q evaluation. For a prefix of length T
/// the total is exactly T*(T+1)/2 * sum_s |A_s|.
struct ConstructCounters {
    std::uint64_t inner_updates = 0;
};

/// Backward induction for the prefix players, given that everyone from
/// `switch_time` on plays `tail`. For each player t (own discount g(t)) the
/// continuation is valued by policy evaluation of the tail, then rolled back
/// through the later prefix entries; the player's own entry is the greedy
/// argmax at their step, ties to the smallest action index. Cost is
/// quadratic in the prefix length: T*(T+1)/2 sweeps over all state-action
/// pairs, plus one policy evaluation per player.
template <typename S>
DynamicPolicy construct_with_tail(const Mdp& mdp, const DiscountFunction& g, const StaticPolicy& tail,
                                  const BigInt& switch_time, ConstructCounters* counters = nullptr,
                                  std::uint64_t horizon_cap = kDefaultHorizonCap) {
    require_policy_valid(mdp, tail, "construct_with_tail");
    if (switch_time < 0) throw std::invalid_argument("construct_with_tail: switch time must be >= 0");
    if (switch_time > BigInt(static_cast<unsigned long>(horizon_cap)))
        throw HorizonCapExceeded("construct_with_tail: prefix length " + switch_time.get_str() +
                                 " exceeds the horizon cap " + std::to_string(horizon_cap));
    const std::size_t T = static_cast<std::size_t>(switch_time.get_ui());
    DynamicPolicy out;
    out.tail = tail;
    out.prefix.assign(T, StaticPolicy{std::vector<int>(static_cast<std::size_t>(mdp.num_states()), 0)});
    const S tie_tol = ScalarOps<S>::tie_tolerance();
    for (std::size_t back = 0; back < T; ++back) {
        const std::size_t t = T - 1 - back;
        const S gamma_t = discount_at<S>(g, BigInt(static_cast<unsigned long>(t)));
        ValueTable<S> v = evaluate_policy(mdp, tail, gamma_t);
        for (std::size_t i = T - 1; i > t; --i) {
            QTable<S> q = q_from_values(mdp, v, gamma_t);
            if (counters) counters->inner_updates += static_cast<std::uint64_t>(mdp.total_action_count());
            for (int s = 0; s < mdp.num_states(); ++s)
                v[static_cast<std::size_t>(s)] =
                    q[static_cast<std::size_t>(s)][static_cast<std::size_t>(out.prefix[i](s))];
        }
        QTable<S> q = q_from_values(mdp, v, gamma_t);
        if (counters) counters->inner_updates += static_cast<std::uint64_t>(mdp.total_action_count());
        for (int s = 0; s < mdp.num_states(); ++s)
            out.prefix[t].choice[static_cast<std::size_t>(s)] = argmax_action(q[static_cast<std::size_t>(s)], tie_tol);
    }
    return out;
}

struct SpeOptions {
    std::uint64_t horizon_cap = kDefaultHorizonCap;
    /// Run the construction in exact rational arithmetic instead of doubles.
    bool exact_arithmetic = false;
};

/// Exact subgame perfect equilibrium, available when the discount limit
/// avoids every degenerate point. Locates the degenerate-point-free interval
/// around the limit, obtains the convergence time for half the distance to
/// its boundary, takes an optimal tail there, and fills the prefix by
/// backward induction. Always runs in exact arithmetic. Throws
/// DegenerateLimit when the limit is a degenerate point.
DynamicPolicy compute_exact_spe(const Mdp& mdp, const DiscountFunction& g, GammaSet& gamma_set,
                                const SpeOptions& options = {});

/// eps-equilibrium under the known-gap assumption lim g < 1 - c: requests
/// convergence within D = c^4 * min(eps / (4*M*|S|), c), takes an optimal
/// tail at the returned switch time, and fills the prefix by backward
/// induction. Requires eps > 0 and c in (0,1].
DynamicPolicy compute_eps_spe(const Mdp& mdp, const DiscountFunction& g, const Rational& eps, const Rational& c,
                              const SpeOptions& options = {});

/// Separation scale for the unknown-gap variant: either an explicit value or
/// its base-2 logarithm (for scales too small to materialize).
struct SeparationHint {
    std::optional<Rational> value;
    std::optional<Rational> log2_value;

    static SeparationHint from_value(Rational v) { return {std::move(v), std::nullopt}; }
    static SeparationHint from_log2(Rational l) { return {std::nullopt, std::move(l)}; }
};

/// eps-equilibrium without assuming the limit is bounded away from 1. The
/// separation scale D comes from the hint when supplied, else from the exact
/// minimum gap of the instance's degenerate set (small instances), else from
/// the closed-form worst-case bound carried in log space. When the tail of g
/// provably lies between the largest degenerate point and 1, the output is
/// an exact equilibrium; otherwise the construction aims at slack <= eps.
DynamicPolicy compute_eps_spe_unknown_gap(const Mdp& mdp, const DiscountFunction& g, const Rational& eps,
                                          std::optional<SeparationHint> separation = std::nullopt,
                                          const SpeOptions& options = {});

}  // namespace tvmdp
