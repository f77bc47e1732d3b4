#pragma once

#include <stdexcept>
#include <vector>

#include "tvmdp/errors.hpp"
#include "tvmdp/mdp.hpp"

namespace tvmdp {

template <typename S>
using ValueTable = std::vector<S>;  // indexed by state

template <typename S>
using QTable = std::vector<std::vector<S>>;  // [state][action]

/// Adapters for running the solvers either in floating point (S = double)
/// or in exact rational arithmetic (S = Rational).
template <typename S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static constexpr bool exact = false;
    static double from(const Rational& x) { return to_double(x); }
    static double reward(const Mdp& m, int s, int a) { return m.reward_d(s, a); }
    static double tie_tolerance() { return 1e-9; }
};

template <>
struct ScalarOps<Rational> {
    static constexpr bool exact = true;
    static const Rational& from(const Rational& x) { return x; }
    static const Rational& reward(const Mdp& m, int s, int a) { return m.action(s, a).reward; }
    static Rational tie_tolerance() { return Rational(0); }
};

namespace detail {

/// Dense linear solve, partial-pivot LU. Throws std::runtime_error on a
/// singular system (impossible for I - gamma*P with gamma < 1 and valid
/// rows, so a failure indicates a malformed instance).
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b);

/// Exact Gaussian elimination over the rationals.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

template <typename S>
void require_discount(const S& gamma) {
    if (gamma < 0 || gamma >= 1) throw std::invalid_argument("discount factor must lie in [0,1)");
}

template <typename S>
S expected_next(const Mdp& mdp, int s, int a, const ValueTable<S>& values) {
    S acc(0);
    if constexpr (ScalarOps<S>::exact) {
        const auto& row = mdp.action(s, a).next;
        for (int j = 0; j < mdp.num_states(); ++j)
            if (row[static_cast<std::size_t>(j)] != 0) acc += row[static_cast<std::size_t>(j)] * values[static_cast<std::size_t>(j)];
    } else {
        const auto& row = mdp.next_d(s, a);
        for (int j = 0; j < mdp.num_states(); ++j) acc += row[static_cast<std::size_t>(j)] * values[static_cast<std::size_t>(j)];
    }
    return acc;
}

}  // namespace detail

/// Solves V(s) = R(s, pi(s)) + gamma * sum_s' P(s, pi(s), s') V(s') as an
/// n-by-n linear system; the unique fixed point for gamma < 1.
template <typename S>
ValueTable<S> evaluate_policy(const Mdp& mdp, const StaticPolicy& policy, const S& gamma) {
    detail::require_discount(gamma);
    require_policy_valid(mdp, policy, "evaluate_policy");
    const int n = mdp.num_states();
    std::vector<std::vector<S>> a(static_cast<std::size_t>(n), std::vector<S>(static_cast<std::size_t>(n), S(0)));
    std::vector<S> b(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const int act = policy(s);
        b[static_cast<std::size_t>(s)] = ScalarOps<S>::reward(mdp, s, act);
        for (int j = 0; j < n; ++j) {
            S p;
            if constexpr (ScalarOps<S>::exact)
                p = mdp.action(s, act).next[static_cast<std::size_t>(j)];
            else
                p = mdp.next_d(s, act)[static_cast<std::size_t>(j)];
            a[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = (s == j ? S(1) : S(0)) - gamma * p;
        }
    }
    return detail::solve_linear(std::move(a), std::move(b));
}

/// Q(s,a) = R(s,a) + gamma * sum_s' P(s,a,s') V(s').
template <typename S>
QTable<S> q_from_values(const Mdp& mdp, const ValueTable<S>& values, const S& gamma) {
    if (static_cast<int>(values.size()) != mdp.num_states())
        throw std::invalid_argument("q_from_values: value table does not cover all states");
    QTable<S> q(static_cast<std::size_t>(mdp.num_states()));
    for (int s = 0; s < mdp.num_states(); ++s) {
        q[static_cast<std::size_t>(s)].reserve(static_cast<std::size_t>(mdp.num_actions(s)));
        for (int act = 0; act < mdp.num_actions(s); ++act)
            q[static_cast<std::size_t>(s)].push_back(ScalarOps<S>::reward(mdp, s, act) +
                                                     gamma * detail::expected_next(mdp, s, act, values));
    }
    return q;
}

/// Smallest action index whose Q-value is within `tolerance` of the row
/// maximum.
template <typename S>
int argmax_action(const std::vector<S>& row, const S& tolerance) {
    S best = row[0];
    for (const auto& v : row)
        if (v > best) best = v;
    for (std::size_t a = 0; a < row.size(); ++a)
        if (row[a] >= best - tolerance) return static_cast<int>(a);
    return 0;  // unreachable
}

template <typename S>
struct OptimalSolution {
    StaticPolicy policy;
    ValueTable<S> values;
};

/// Howard policy iteration, started from the lexicographically smallest
/// policy. A state's action changes only when strictly improving, so values
/// increase monotonically and the iteration terminates; the returned policy
/// is normalized to the smallest action index within `tie_tolerance` of the
/// greedy maximum.
template <typename S>
OptimalSolution<S> optimal_policy(const Mdp& mdp, const S& gamma, const S& tie_tolerance = ScalarOps<S>::tie_tolerance()) {
    detail::require_discount(gamma);
    const int n = mdp.num_states();
    StaticPolicy pi{std::vector<int>(static_cast<std::size_t>(n), 0)};
    ValueTable<S> values;
    QTable<S> q;
    for (int round = 0;; ++round) {
        if (round > 100000) throw std::logic_error("optimal_policy: policy iteration failed to converge");
        values = evaluate_policy(mdp, pi, gamma);
        q = q_from_values(mdp, values, gamma);
        bool changed = false;
        for (int s = 0; s < n; ++s) {
            int best = pi(s);
            for (int a = 0; a < mdp.num_actions(s); ++a)
                if (q[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] >
                    q[static_cast<std::size_t>(s)][static_cast<std::size_t>(best)])
                    best = a;
            if (best != pi(s)) {
                pi.choice[static_cast<std::size_t>(s)] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }
    for (int s = 0; s < n; ++s)
        pi.choice[static_cast<std::size_t>(s)] = argmax_action(q[static_cast<std::size_t>(s)], tie_tolerance);
    return {std::move(pi), std::move(values)};
}

template <typename S>
struct OptimalActionSets {
    S gamma;
    S tolerance;
    std::vector<std::vector<int>> per_state;  // actions with Q*(s,a) >= V*(s) - tolerance

    /// Number of policies in the represented product set.
    double policy_count() const {
        double c = 1;
        for (const auto& set : per_state) c *= static_cast<double>(set.size());
        return c;
    }
};

/// All actions within `tolerance` of greedy-optimal at the given discount;
/// the product over states is the set of optimal policies there.
template <typename S>
OptimalActionSets<S> optimal_action_sets(const Mdp& mdp, const S& gamma, const S& tolerance) {
    if (tolerance < 0) throw std::invalid_argument("optimal_action_sets: negative tolerance");
    auto opt = optimal_policy(mdp, gamma);
    QTable<S> q = q_from_values(mdp, opt.values, gamma);
    OptimalActionSets<S> out{gamma, tolerance, {}};
    out.per_state.resize(static_cast<std::size_t>(mdp.num_states()));
    for (int s = 0; s < mdp.num_states(); ++s) {
        const auto& row = q[static_cast<std::size_t>(s)];
        S best = row[0];
        for (const auto& v : row)
            if (v > best) best = v;
        for (std::size_t a = 0; a < row.size(); ++a)
            if (row[a] >= best - tolerance) out.per_state[static_cast<std::size_t>(s)].push_back(static_cast<int>(a));
    }
    return out;
}

/// True iff the two policies have identical value functions at every state
/// for every discount in [0,1); decided exactly on the rational functions,
/// not on sampled values. Defined with the symbolic machinery.
bool policies_equivalent(const Mdp& mdp, const StaticPolicy& p1, const StaticPolicy& p2);

template <typename S>
struct FiniteHorizonTables {
    std::vector<QTable<S>> q;       // q[t], t = 0..T-1
    std::vector<ValueTable<S>> v;   // v[t], t = 0..T-1; v[T] == 0 implicitly
};

/// Backward value iteration over a finite horizon with zero terminal values:
/// V_T == 0, Q_t(s,a) = R(s,a) + gamma * sum P V_{t+1}, V_t = max_a Q_t.
/// Materializes all T tables, so the horizon is capped.
template <typename S>
FiniteHorizonTables<S> finite_horizon_values(const Mdp& mdp, const S& gamma, const BigInt& horizon,
                                             std::uint64_t cap = kDefaultHorizonCap) {
    detail::require_discount(gamma);
    if (horizon < 1) throw std::invalid_argument("finite_horizon_values: horizon must be >= 1");
    if (horizon > BigInt(static_cast<unsigned long>(cap)))
        throw HorizonCapExceeded("finite_horizon_values: horizon " + horizon.get_str() +
                                 " exceeds the materialization cap " + std::to_string(cap));
    const std::size_t T = static_cast<std::size_t>(horizon.get_ui());
    FiniteHorizonTables<S> out;
    out.q.resize(T);
    out.v.resize(T);
    ValueTable<S> next(static_cast<std::size_t>(mdp.num_states()), S(0));
    for (std::size_t back = 0; back < T; ++back) {
        std::size_t t = T - 1 - back;
        out.q[t] = q_from_values(mdp, next, gamma);
        ValueTable<S> vt(static_cast<std::size_t>(mdp.num_states()));
        for (int s = 0; s < mdp.num_states(); ++s) {
            const auto& row = out.q[t][static_cast<std::size_t>(s)];
            S best = row[0];
            for (const auto& val : row)
                if (val > best) best = val;
            vt[static_cast<std::size_t>(s)] = best;
        }
        out.v[t] = vt;
        next = std::move(vt);
    }
    return out;
}

/// Decides whether the flagged start-state action is greedy-optimal at time
/// 0 of the finite-horizon computation. Uses a rolling value table, so only
/// the iteration count (not the memory) is bounded by the cap.
template <typename S>
bool solve_valit(const Mdp& mdp, int flagged_action, const BigInt& horizon, const S& gamma,
                 const S& tie_tolerance = ScalarOps<S>::tie_tolerance(), std::uint64_t cap = kDefaultHorizonCap) {
    detail::require_discount(gamma);
    if (horizon < 1) throw std::invalid_argument("solve_valit: horizon must be >= 1");
    if (flagged_action < 0 || flagged_action >= mdp.num_actions(mdp.start_state()))
        throw std::invalid_argument("solve_valit: flagged action is not available in the start state");
    if (horizon > BigInt(static_cast<unsigned long>(cap)))
        throw HorizonCapExceeded("solve_valit: horizon " + horizon.get_str() + " exceeds the iteration cap " +
                                 std::to_string(cap));
    const std::uint64_t T = horizon.get_ui();
    ValueTable<S> next(static_cast<std::size_t>(mdp.num_states()), S(0));
    QTable<S> q;
    for (std::uint64_t back = 0; back < T; ++back) {
        q = q_from_values(mdp, next, gamma);
        for (int s = 0; s < mdp.num_states(); ++s) {
            const auto& row = q[static_cast<std::size_t>(s)];
            S best = row[0];
            for (const auto& val : row)
                if (val > best) best = val;
            next[static_cast<std::size_t>(s)] = best;
        }
    }
    const auto& row = q[static_cast<std::size_t>(mdp.start_state())];
    S best = row[0];
    for (const auto& val : row)
        if (val > best) best = val;
    return row[static_cast<std::size_t>(flagged_action)] >= best - tie_tolerance;
}

}  // namespace tvmdp
