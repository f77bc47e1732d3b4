// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "support/test_util.hpp"
#include "tvmdp/instances.hpp"
#include "tvmdp/reduction.hpp"
#include "tvmdp/spe.hpp"
#include "tvmdp/verifier.hpp"

using namespace tvmdp;

namespace {

struct Criterion {
    std::string name;
    std::function<void(std::ostringstream&)> body;  // throws on failure
    double time_limit_seconds = 0;                  // 0: no limit
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define REQUIRE_MSG(cond, msg)                                  \
    do {                                                        \
        if (!(cond)) {                                          \
            std::ostringstream oss_;                            \
            oss_ << msg;                                        \
            throw Failure(oss_.str());                          \
        }                                                       \
    } while (0)

// --- 1. preference reversal under constant discounting ---------------------

void criterion_preference_reversal(std::ostringstream& detail) {
    auto r = preference_reversal_demo();
    const double early_myopic = 100 * std::pow(0.75, 3);
    const double late_myopic = 110 * std::pow(0.75, 4);
    const double early_far = 100 * std::pow(0.95, 3);
    const double late_far = 110 * std::pow(0.95, 4);
    REQUIRE_MSG(std::abs(r.early_value_myopic - early_myopic) <= 1e-9, "early value at 0.75 off");
    REQUIRE_MSG(std::abs(r.late_value_myopic - late_myopic) <= 1e-9, "late value at 0.75 off");
    REQUIRE_MSG(std::abs(r.early_value_farsighted - early_far) <= 1e-9, "early value at 0.95 off");
    REQUIRE_MSG(std::abs(r.late_value_farsighted - late_far) <= 1e-9, "late value at 0.95 off");
    REQUIRE_MSG(r.early_value_myopic > r.late_value_myopic, "0.75 must prefer the early reward");
    REQUIRE_MSG(r.early_value_farsighted < r.late_value_farsighted, "0.95 must prefer the late reward");
    // The optimal policy itself agrees at both factors.
    Mdp m = two_option_delay_mdp();
    auto myopic = optimal_policy<double>(m, 0.75);
    auto farsighted = optimal_policy<double>(m, 0.95);
    REQUIRE_MSG(m.action(0, myopic.policy(0)).name == "early", "0.75 policy");
    REQUIRE_MSG(std::abs(myopic.values[0] - early_myopic) <= 1e-9, "0.75 start value");
    REQUIRE_MSG(m.action(0, farsighted.policy(0)).name == "late", "0.95 policy");
    REQUIRE_MSG(std::abs(farsighted.values[0] - late_far) <= 1e-9, "0.95 start value");
    detail << "values " << myopic.values[0] << " > " << r.late_value_myopic << " then " << farsighted.values[0]
           << " > " << r.early_value_farsighted;
}

// --- 2. the two-phase worked example ----------------------------------------

void criterion_two_phase_example(std::ostringstream& detail) {
    Mdp m = cycle_vs_steady_mdp();

    // Instance completion first passes a brute-force validation: a 200-step
    // truncated evaluation of all 3 policies reproduces the stated optima.
    struct Expected {
        double gamma;
        const char* s0_action;
    };
    for (const Expected& e : {Expected{0.1, "stay"}, Expected{0.8, "cycle"}}) {
        int best = -1;
        double best_value = -1e300;
        for (int a = 0; a < m.num_actions(0); ++a) {
            StaticPolicy pi{{a, 0, 0}};
            double v = testutil::truncated_value(m, pi, 0, e.gamma, 200);
            if (v > best_value) {
                best_value = v;
                best = a;
            }
        }
        REQUIRE_MSG(m.action(0, best).name == e.s0_action,
                    "brute validation at " << e.gamma << ": got " << m.action(0, best).name);
    }
    // Stated optimal policies, exact arithmetic.
    auto myopic = optimal_policy<Rational>(m, Rational(1, 10));
    REQUIRE_MSG(m.action(0, myopic.policy(0)).name == "stay", "optimal at 0.1 in the hub");
    REQUIRE_MSG(m.action(1, myopic.policy(1)).name == "back", "optimal at 0.1 in the partner state");
    REQUIRE_MSG(m.action(2, myopic.policy(2)).name == "stay", "optimal at 0.1 in the steady state");
    auto farsighted = optimal_policy<Rational>(m, Rational(4, 5));
    REQUIRE_MSG(m.action(0, farsighted.policy(0)).name == "cycle", "optimal at 0.8 in the hub");

    // The equilibrium of (0.1, 0.8, 0.8, ...) exits at step 0.
    auto g = DiscountFunction::two_phase(Rational(1, 10), Rational(4, 5), 0);
    DynamicPolicy dp = construct_with_tail<Rational>(m, g, farsighted.policy, 1);
    REQUIRE_MSG(m.action(0, dp.prefix.at(0)(0)).name == "exit", "equilibrium start action");
    VerifyOptions vo;
    vo.exact_arithmetic = true;
    auto report = verify_equilibrium(m, g, dp, Rational(0), vo);
    REQUIRE_MSG(report.passed, "equilibrium verification");
    REQUIRE_MSG(report.max_slack <= 1e-9, "slack " << report.max_slack);
    detail << "start action 'exit', max slack " << report.max_slack;
}

// --- 3. value-function continuity bound -------------------------------------

void criterion_continuity_bound(std::ostringstream& detail) {
    std::mt19937_64 rng(1003);
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        Mdp m = testutil::random_mdp(rng, 5, 3);
        StaticPolicy pi = testutil::random_policy(rng, m);
        double a = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
        double b = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
        if (!continuity_bound_check(m, pi, a, b).holds) ++violations;
    }
    REQUIRE_MSG(violations == 0, violations << " violations out of 1000");
    detail << "1000 cases, 0 violations";
}

// --- 4. backward-induction construction soundness ---------------------------

void criterion_construction_soundness(std::ostringstream& detail) {
    std::mt19937_64 rng(1004);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        Mdp m = testutil::random_mdp(rng, 5, 3);
        const std::uint64_t T = std::uniform_int_distribution<std::uint64_t>(0, 20)(rng);
        std::vector<Rational> head;
        for (std::uint64_t t = 0; t < T; ++t) {
            Rational v{std::uniform_int_distribution<long>(0, 90)(rng), 100};
            v.canonicalize();
            head.push_back(v);
        }
        Rational tail_gamma{std::uniform_int_distribution<long>(0, 90)(rng), 100};
        tail_gamma.canonicalize();
        auto g = DiscountFunction::table(std::move(head), tail_gamma);
        StaticPolicy tail = optimal_policy<double>(m, to_double(tail_gamma)).policy;
        ConstructCounters counters;
        DynamicPolicy dp = construct_with_tail<double>(m, g, tail, BigInt(T), &counters);
        REQUIRE_MSG(counters.inner_updates ==
                        T * (T + 1) / 2 * static_cast<std::uint64_t>(m.total_action_count()),
                    "inner-update count mismatch at instance " << k);
        auto report = verify_equilibrium(m, g, dp, rational_from_string("1e-8"));
        REQUIRE_MSG(report.passed, "instance " << k << " failed with slack " << report.max_slack);
        worst = std::max(worst, report.max_slack);
    }
    detail << "50 instances, worst slack " << worst << ", update counts exact";
}

// --- 5. eps-equilibrium construction soundness ------------------------------

void criterion_eps_spe_soundness(std::ostringstream& detail) {
    std::mt19937_64 rng(1005);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        Mdp m = testutil::random_mdp(rng, 5, 3);
        DiscountFunction g = [&] {
            if (k % 2 == 0) {
                Rational limit{std::uniform_int_distribution<long>(10, 85)(rng), 100};
                limit.canonicalize();
                Rational amplitude{std::uniform_int_distribution<long>(1, 10)(rng), 100};
                amplitude.canonicalize();
                if (limit - amplitude < 0) amplitude = limit;
                return DiscountFunction::geometric_approach(limit, amplitude, Rational(1, 2));
            }
            Rational gamma{std::uniform_int_distribution<long>(10, 85)(rng), 100};
            gamma.canonicalize();
            return DiscountFunction::down_step(gamma, 3 + k % 7);
        }();
        const Rational c{1, 10};  // limits stay <= 0.85 < 1 - c
        const Rational eps = k % 2 == 0 ? Rational(1, 10) : Rational(1, 100);
        DynamicPolicy dp = compute_eps_spe(m, g, eps, c);
        auto report = verify_equilibrium(m, g, dp, eps);
        REQUIRE_MSG(report.passed, "instance " << k << " failed with slack " << report.max_slack << " > "
                                               << to_double(eps));
        worst = std::max(worst, report.max_slack);
    }
    detail << "50 instances at eps in {0.1, 0.01}, worst slack " << worst;
}

// --- 6. degenerate-point isolation -------------------------------------------

void criterion_degenerate_points(std::ostringstream& detail) {
    Mdp single = crossing_mdp();
    GammaSet gs = compute_gamma_set(single);
    REQUIRE_MSG(gs.points.size() == 1, "expected one degenerate point, got " << gs.points.size());
    gs.refine(rational_from_string("1/1000000"));
    REQUIRE_MSG(gs.points[0].interval.contains(Rational(1, 2)), "interval must contain 1/2");
    REQUIRE_MSG(to_double(gs.points[0].interval.width()) <= 1e-6, "interval too wide");

    Mdp squared = crossing_mdp_squared();
    GammaSet gsq = compute_gamma_set(squared);
    REQUIRE_MSG(gsq.points.size() == 1, "expected one degenerate point for the squared variant");
    gsq.refine(rational_from_string("1/1000000"));
    const double root = 1.0 / std::sqrt(3.0);
    REQUIRE_MSG(to_double(gsq.points[0].interval.lo) <= root && root <= to_double(gsq.points[0].interval.hi),
                "interval must contain 1/sqrt(3)");
    REQUIRE_MSG(to_double(gsq.points[0].interval.width()) <= 1e-6, "interval too wide");

    // Optimal-policy sampling at 5 points on each side of each interval:
    // one equivalence class per side, constant across the side.
    for (auto* scenario : {&gs, &gsq}) {
        const Mdp& m = scenario == &gs ? single : squared;
        const auto& iv = scenario->points[0].interval;
        auto side = [&](const Rational& lo, const Rational& hi) {
            std::vector<std::vector<int>> first;
            for (int i = 1; i <= 5; ++i) {
                Rational gamma = lo + (hi - lo) * Rational(i, 6);
                auto sets = optimal_action_sets<Rational>(m, gamma, Rational(0));
                REQUIRE_MSG(sets.policy_count() == 1, "more than one optimal class at "
                                                          << to_double(gamma));
                if (first.empty())
                    first = sets.per_state;
                else
                    REQUIRE_MSG(first == sets.per_state, "optimal set changed within one side");
            }
        };
        side(Rational(0), iv.lo);
        side(iv.hi, Rational(1));
    }
    detail << "crossings isolated at 1/2 (exact) and 1/sqrt(3) within 1e-6; sides are constant";
}

// --- 7. reduction equivalence -------------------------------------------------

void criterion_reduction_equivalence(std::ostringstream& detail) {
    std::mt19937_64 rng(1007);
    std::vector<Mdp> family;
    for (int k = 0; k < 6; ++k) family.push_back(testutil::random_mdp(rng, 3, 2, /*integer_rewards=*/true));
    // Tie-heavy and stochastic members.
    family.push_back(Mdp({"s"}, {{ActionSpec{"a", 1, {Rational(1)}}, ActionSpec{"b", 1, {Rational(1)}}}}, 0));
    family.push_back(Mdp({"s", "t"},
                         {{ActionSpec{"a", 2, {Rational(1, 2), Rational(1, 2)}},
                           ActionSpec{"b", 0, {Rational(0), Rational(1)}}},
                          {ActionSpec{"c", -3, {Rational(1), Rational(0)}}}},
                         0));
    int cases = 0;
    Rational worst_dominance_slack(1000000);
    for (const Mdp& m : family) {
        for (const Rational& gamma : {Rational(1, 2), Rational(3, 4)}) {
            for (int horizon = 1; horizon <= 5; ++horizon) {
                for (int a = 0; a < m.num_actions(m.start_state()); ++a) {
                    const bool expected = solve_valit<Rational>(m, a, horizon, gamma);
                    auto gadget = build_gadget(m, gamma, horizon, a);
                    const bool got = answer_spe_start(gadget, SpeStartMethod::brute);
                    REQUIRE_MSG(got == expected, "mismatch: horizon " << horizon << ", gamma "
                                                                      << rational_to_string(gamma) << ", action "
                                                                      << m.action(m.start_state(), a).name);
                    ++cases;
                }
                auto dom = check_gadget_dominance(build_gadget(m, gamma, horizon, 0));
                REQUIRE_MSG(dom.exit_dominated_for_discounting_players,
                            "exit must be strictly suboptimal for discounting players");
                REQUIRE_MSG(dom.exit_dominant_for_first_myopic_player,
                            "exit must strictly dominate for the first myopic player");
                REQUIRE_MSG(dom.min_exit_slack_discounting_players > 0, "dominance slack must be positive");
                if (dom.min_exit_slack_discounting_players < worst_dominance_slack)
                    worst_dominance_slack = dom.min_exit_slack_discounting_players;
            }
        }
    }
    detail << cases << " start-action answers match the finite-horizon recursion; min dominance slack "
           << to_double(worst_dominance_slack);
}

// --- 8. separation bound -------------------------------------------------------

void criterion_separation_bound(std::ostringstream& detail) {
    auto sb = separation_bound(2, 2, 1);
    BigInt two_to_65;
    mpz_ui_pow_ui(two_to_65.get_mpz_t(), 2, 65);
    REQUIRE_MSG(sb.log2_value == -Rational(two_to_65), "log2 D must be exactly -2^65 for (2,2,1)");

    // Wherever the exact minimum gap is computable, it dominates the bound
    // (compared in log space; D itself is far below any float).
    int checked = 0;
    for (Mdp m : {crossing_mdp(), crossing_mdp_squared(), double_crossing_mdp(), cycle_vs_steady_mdp()}) {
        GammaSet gs = compute_gamma_set(m);
        Rational gap = min_gap(gs);
        auto bound = separation_bound(m);
        REQUIRE_MSG(compare_pow2(bound.log2_value, gap) < 0,
                    "min gap must dominate the worst-case bound on a " << m.num_states() << "-state instance");
        ++checked;
    }
    detail << "log2 D(2,2,1) = -2^65 exactly; " << checked << " instances with min_gap >= D";
}

// --- 9. exact/numeric agreement ------------------------------------------------

void criterion_exact_numeric_agreement(std::ostringstream& detail) {
    std::mt19937_64 rng(1009);
    for (int k = 0; k < 20; ++k) {
        Mdp m = testutil::random_mdp(rng, 5, 3);
        StaticPolicy pi = testutil::random_policy(rng, m);
        auto vfun = value_rational_all(m, pi);
        for (int j = 0; j < 50; ++j) {
            Rational gamma{std::uniform_int_distribution<long>(0, 950)(rng), 1000};
            gamma.canonicalize();
            auto exact = evaluate_policy<Rational>(m, pi, gamma);
            auto approx = evaluate_policy<double>(m, pi, to_double(gamma));
            for (int s = 0; s < m.num_states(); ++s) {
                REQUIRE_MSG(vfun[std::size_t(s)](gamma) == exact[std::size_t(s)],
                            "symbolic and exact evaluation differ at state " << s);
                REQUIRE_MSG(std::abs(to_double(exact[std::size_t(s)]) - approx[std::size_t(s)]) <= 1e-9,
                            "float path deviates at state " << s);
            }
        }
    }
    detail << "20 instances x 50 discounts: symbolic == exact, float within 1e-9";
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"1. preference reversal at constant 0.75 / 0.95", criterion_preference_reversal, 1.0},
        {"2. two-phase worked example (validated reconstruction)", criterion_two_phase_example, 0},
        {"3. value-function continuity bound, 1000 random cases", criterion_continuity_bound, 30.0},
        {"4. backward-induction soundness + exact update counts", criterion_construction_soundness, 0},
        {"5. eps-equilibrium soundness at eps in {0.1, 0.01}", criterion_eps_spe_soundness, 0},
        {"6. degenerate-point isolation and side constancy", criterion_degenerate_points, 10.0},
        {"7. reduction answers match the finite-horizon recursion", criterion_reduction_equivalence, 60.0},
        {"8. separation bound: closed form and log-space dominance", criterion_separation_bound, 0},
        {"9. symbolic/exact/float value agreement", criterion_exact_numeric_agreement, 0},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::ostringstream detail;
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criterion.body(detail);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && criterion.time_limit_seconds > 0 && seconds > criterion.time_limit_seconds) {
            std::ostringstream oss;
            oss << "time limit exceeded: " << seconds << "s > " << criterion.time_limit_seconds << "s";
            error = oss.str();
        }
        if (error.empty()) {
            std::printf("[PASS] %s (%.2fs) %s\n", criterion.name.c_str(), seconds,
                        detail.str().empty() ? "" : ("- " + detail.str()).c_str());
        } else {
            std::printf("[FAIL] %s (%.2fs) - %s\n", criterion.name.c_str(), seconds, error.c_str());
            ++failures;
        }
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
                criteria.size());
    return failures == 0 ? 0 : 1;
}
