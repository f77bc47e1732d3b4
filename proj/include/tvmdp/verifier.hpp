#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvmdp/discount.hpp"
#include "tvmdp/errors.hpp"
#include "tvmdp/gamma_algebra.hpp"
#include "tvmdp/mdp.hpp"
#include "tvmdp/solvers.hpp"

namespace tvmdp {

/// One-shot-deviation gain of player t at a state: how much switching only
/// that player's action could improve their own discounted payoff.
struct SlackEntry {
    std::uint64_t player = 0;
    int state = 0;
    double slack = 0;
    std::optional<Rational> slack_exact;  // present on the exact path
};

struct EquilibriumReport {
    /// eps == 0 request means an exact-equilibrium check.
    bool exact_kind = false;
    double eps = 0;
    double max_slack = 0;
    std::optional<Rational> max_slack_exact;
    std::vector<SlackEntry> slacks;
    /// Largest player index that was checked directly.
    std::uint64_t horizon_checked = 0;
    /// Tail players beyond the switch time checked directly.
    std::uint64_t tail_extra = 0;
    /// Tail optimality gap at the limit discount (absent when the limit is 1).
    std::optional<double> limit_slack;
    bool passed = false;
    /// True when the degenerate set was supplied and the tail discounts
    /// provably stay inside one degenerate-point-free interval, so the
    /// sampled tail checks cover every tail player exactly. Otherwise the
    /// verdict for the unsampled tail players is eps-certified only.
    bool tail_exactness_certified = false;
    /// How the infinitely many tail players are covered.
    std::string tail_certification;

    const SlackEntry* worst() const;
};

struct VerifyOptions {
    std::uint64_t tail_extra = 5;
    bool exact_arithmetic = false;
    std::uint64_t horizon_cap = kDefaultHorizonCap;
    /// Degenerate set of the instance, when available: enables the exact
    /// tail certification above.
    const GammaSet* gamma_set = nullptr;
};

/// Certifies a dynamic policy as an (eps-)equilibrium by brute one-shot
/// deviation checks: for every player t up to the switch time plus
/// `tail_extra`, the deviation gain max_a Q - Q(chosen) is computed at every
/// state by an independent backward recursion (only policy evaluation is
/// shared with the solvers), plus a tail-optimality check at the limit
/// discount. Passes iff the maximum gain is at most eps + 1e-10.
EquilibriumReport verify_equilibrium(const Mdp& mdp, const DiscountFunction& g, const DynamicPolicy& dp,
                                     const Rational& eps, const VerifyOptions& options = {});

/// Value-function continuity bound between two discount factors:
/// lhs = max_s |V_gamma(s) - V_gamma_tilde(s)|,
/// rhs = 2*M*|S|*|gamma - gamma_tilde| / ((1-max)^3 (1-min)).
struct ContinuityCheck {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

ContinuityCheck continuity_bound_check(const Mdp& mdp, const StaticPolicy& policy, double gamma, double gamma_tilde);

/// The worked example of discounting-induced preference reversal: a choice
/// between a reward of 100 three steps ahead and 110 four steps ahead.
struct PreferenceReversalReport {
    double myopic_gamma = 0;
    double farsighted_gamma = 0;
    double early_value_myopic = 0;      // 100 * g^3
    double late_value_myopic = 0;       // 110 * g^4
    double early_value_farsighted = 0;
    double late_value_farsighted = 0;
    bool myopic_prefers_early = false;
    bool farsighted_prefers_late = false;
    /// Re-evaluated one step later under the myopic factor (the two-phase
    /// agent that planned for the late reward).
    double early_value_at_step_one = 0;  // 100 * g^2
    double late_value_at_step_one = 0;   // 110 * g^3
    bool plan_abandoned_at_step_one = false;
    bool reversal = false;
};

PreferenceReversalReport preference_reversal_demo();

}  // namespace tvmdp
