#include "tvmdp/verifier.hpp"

#include <cmath>

#include "tvmdp/instances.hpp"

namespace tvmdp {

namespace {

const Rational& pass_cushion() {
    static const Rational cushion(1, 10000000000L);  // 1e-10
    return cushion;
}

template <typename S>
void run_checks(const Mdp& mdp, const DiscountFunction& g, const DynamicPolicy& dp, EquilibriumReport& report,
                std::uint64_t players_checked) {
    const std::uint64_t T = dp.switch_time();
    for (std::uint64_t t = 0; t < players_checked; ++t) {
        const S gamma_t = discount_at<S>(g, BigInt(static_cast<unsigned long>(t)));
        ValueTable<S> v = evaluate_policy(mdp, dp.tail, gamma_t);
        for (std::uint64_t i = T; i-- > t + 1;) {
            QTable<S> q = q_from_values(mdp, v, gamma_t);
            const StaticPolicy& pi = dp.prefix[static_cast<std::size_t>(i)];
            for (int s = 0; s < mdp.num_states(); ++s)
                v[static_cast<std::size_t>(s)] = q[static_cast<std::size_t>(s)][static_cast<std::size_t>(pi(s))];
        }
        QTable<S> q = q_from_values(mdp, v, gamma_t);
        const StaticPolicy& chosen = dp.at(static_cast<std::size_t>(t));
        for (int s = 0; s < mdp.num_states(); ++s) {
            const auto& row = q[static_cast<std::size_t>(s)];
            S best = row[0];
            for (const auto& val : row)
                if (val > best) best = val;
            S slack = best - row[static_cast<std::size_t>(chosen(s))];
            SlackEntry entry;
            entry.player = t;
            entry.state = s;
            if constexpr (ScalarOps<S>::exact) {
                entry.slack = to_double(slack);
                entry.slack_exact = slack;
            } else {
                entry.slack = slack;
            }
            report.slacks.push_back(std::move(entry));
        }
    }
}

template <typename S>
std::optional<S> tail_gap_at(const Mdp& mdp, const StaticPolicy& tail, const Rational& gamma) {
    if (gamma >= 1) return std::nullopt;
    const S g = S(ScalarOps<S>::from(gamma));
    ValueTable<S> v = evaluate_policy(mdp, tail, g);
    QTable<S> q = q_from_values(mdp, v, g);
    S worst(0);
    for (int s = 0; s < mdp.num_states(); ++s) {
        const auto& row = q[static_cast<std::size_t>(s)];
        S best = row[0];
        for (const auto& val : row)
            if (val > best) best = val;
        S slack = best - row[static_cast<std::size_t>(tail(s))];
        if (slack > worst) worst = slack;
    }
    return worst;
}

// Exact range of the tail discounts {g(t) : t >= from}: the step and table
// families take finitely many values there, the geometric family is
// monotone between g(from) and its limit.
std::pair<Rational, Rational> tail_discount_range(const DiscountFunction& g, const BigInt& from) {
    return std::visit(
        [&](const auto& d) -> std::pair<Rational, Rational> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) {
                return {d.gamma, d.gamma};
            } else if constexpr (std::is_same_v<T, DownStepDiscount>) {
                if (from > d.step) return {Rational(0), Rational(0)};
                return {Rational(0), d.gamma};
            } else if constexpr (std::is_same_v<T, TwoPhaseDiscount>) {
                if (from > d.step) return {d.second, d.second};
                return {std::min(d.first, d.second), std::max(d.first, d.second)};
            } else if constexpr (std::is_same_v<T, GeometricApproachDiscount>) {
                Rational at = g(from);
                return {std::min(at, d.limit), std::max(at, d.limit)};
            } else {
                Rational lo = d.tail, hi = d.tail;
                for (std::size_t i = 0; i < d.values.size(); ++i) {
                    if (BigInt(static_cast<unsigned long>(i)) < from) continue;
                    lo = std::min(lo, d.values[i]);
                    hi = std::max(hi, d.values[i]);
                }
                return {lo, hi};
            }
        },
        g.data());
}

// The range avoids every isolating interval, so the optimal policy set is
// constant across all tail discounts.
bool range_avoids_degenerate_points(const GammaSet& gs, const Rational& lo, const Rational& hi) {
    for (const auto& p : gs.points)
        if (!(p.interval.hi < lo || hi < p.interval.lo)) return false;
    return true;
}

}  // namespace

const SlackEntry* EquilibriumReport::worst() const {
    const SlackEntry* out = nullptr;
    for (const auto& e : slacks)
        if (!out || e.slack > out->slack) out = &e;
    return out;
}

EquilibriumReport verify_equilibrium(const Mdp& mdp, const DiscountFunction& g, const DynamicPolicy& dp,
                                     const Rational& eps, const VerifyOptions& options) {
    if (eps < 0) throw std::invalid_argument("verify_equilibrium: eps must be >= 0");
    require_policy_valid(mdp, dp.tail, "verify_equilibrium");
    for (const auto& p : dp.prefix) require_policy_valid(mdp, p, "verify_equilibrium");
    if (dp.switch_time() > options.horizon_cap)
        throw HorizonCapExceeded("verify_equilibrium: switch time exceeds the horizon cap");

    EquilibriumReport report;
    report.exact_kind = eps == 0;
    report.eps = to_double(eps);
    report.tail_extra = options.tail_extra;
    const std::uint64_t players_checked = dp.switch_time() + options.tail_extra + 1;
    report.horizon_checked = players_checked - 1;

    if (options.exact_arithmetic)
        run_checks<Rational>(mdp, g, dp, report, players_checked);
    else
        run_checks<double>(mdp, g, dp, report, players_checked);

    Rational limit = g.limit();
    if (options.exact_arithmetic) {
        Rational max_exact(0);
        for (const auto& e : report.slacks)
            if (*e.slack_exact > max_exact) max_exact = *e.slack_exact;
        auto lim = tail_gap_at<Rational>(mdp, dp.tail, limit);
        if (lim) {
            report.limit_slack = to_double(*lim);
            if (*lim > max_exact) max_exact = *lim;
        }
        report.max_slack_exact = max_exact;
        report.max_slack = to_double(max_exact);
        report.passed = max_exact <= eps + pass_cushion();
    } else {
        double max_slack = 0;
        for (const auto& e : report.slacks) max_slack = std::max(max_slack, e.slack);
        auto lim = tail_gap_at<double>(mdp, dp.tail, limit);
        if (lim) {
            report.limit_slack = *lim;
            max_slack = std::max(max_slack, *lim);
        }
        report.max_slack = max_slack;
        report.passed = max_slack <= to_double(eps) + 1e-10;
    }

    if (options.gamma_set) {
        auto [range_lo, range_hi] = tail_discount_range(g, BigInt(static_cast<unsigned long>(dp.switch_time())));
        report.tail_exactness_certified = range_avoids_degenerate_points(*options.gamma_set, range_lo, range_hi);
    }
    if (report.tail_exactness_certified) {
        report.tail_certification =
            "exact: the tail discounts avoid every degenerate point, so the optimal policy set is constant "
            "there and the sampled checks cover all tail players";
    } else {
        report.tail_certification =
            "eps-certified: players beyond the switch time are checked at " + std::to_string(options.tail_extra) +
            " sampled discounts plus the limit discount" +
            (limit >= 1 ? " (limit 1 itself is skipped)" : "") +
            "; without the degenerate set, constancy between samples is assumed, not proved";
    }
    return report;
}

ContinuityCheck continuity_bound_check(const Mdp& mdp, const StaticPolicy& policy, double gamma, double gamma_tilde) {
    if (gamma < 0 || gamma >= 1 || gamma_tilde < 0 || gamma_tilde >= 1)
        throw std::invalid_argument("continuity_bound_check: discounts must lie in [0,1)");
    ValueTable<double> a = evaluate_policy(mdp, policy, gamma);
    ValueTable<double> b = evaluate_policy(mdp, policy, gamma_tilde);
    ContinuityCheck out;
    for (int s = 0; s < mdp.num_states(); ++s)
        out.lhs = std::max(out.lhs, std::abs(a[static_cast<std::size_t>(s)] - b[static_cast<std::size_t>(s)]));
    const double hi = std::max(gamma, gamma_tilde);
    const double lo = std::min(gamma, gamma_tilde);
    const double m_bound = to_double(mdp.reward_bound());
    out.rhs = 2.0 * m_bound * mdp.num_states() * std::abs(gamma - gamma_tilde) /
              (std::pow(1.0 - hi, 3) * (1.0 - lo));
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

PreferenceReversalReport preference_reversal_demo() {
    const Mdp mdp = two_option_delay_mdp();
    const int start = mdp.start_state();
    const int early = mdp.action_index(start, "early");
    const int late = mdp.action_index(start, "late");

    auto option_value = [&](int first_action, double gamma) {
        StaticPolicy pi{std::vector<int>(static_cast<std::size_t>(mdp.num_states()), 0)};
        pi.choice[static_cast<std::size_t>(start)] = first_action;
        return evaluate_policy<double>(mdp, pi, gamma)[static_cast<std::size_t>(start)];
    };

    PreferenceReversalReport r;
    r.myopic_gamma = 0.75;
    r.farsighted_gamma = 0.95;
    r.early_value_myopic = option_value(early, r.myopic_gamma);
    r.late_value_myopic = option_value(late, r.myopic_gamma);
    r.early_value_farsighted = option_value(early, r.farsighted_gamma);
    r.late_value_farsighted = option_value(late, r.farsighted_gamma);
    r.myopic_prefers_early = r.early_value_myopic > r.late_value_myopic;
    r.farsighted_prefers_late = r.late_value_farsighted > r.early_value_farsighted;
    // One step into the late plan, re-valued by the now-myopic agent: the
    // rewards sit 2 and 3 steps ahead.
    r.early_value_at_step_one = 100.0 * r.myopic_gamma * r.myopic_gamma;
    r.late_value_at_step_one = 110.0 * r.myopic_gamma * r.myopic_gamma * r.myopic_gamma;
    r.plan_abandoned_at_step_one = r.farsighted_prefers_late && r.early_value_at_step_one > r.late_value_at_step_one;
    r.reversal = r.myopic_prefers_early && r.farsighted_prefers_late;
    return r;
}

}  // namespace tvmdp
