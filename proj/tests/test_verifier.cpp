#include <doctest.h>

#include <cmath>
#include <random>

#include "support/test_util.hpp"
#include "tvmdp/instances.hpp"
#include "tvmdp/spe.hpp"
#include "tvmdp/verifier.hpp"

using namespace tvmdp;

TEST_CASE("verify: optimal policy under constant discounting is exact") {
    std::mt19937_64 rng(67);
    for (int k = 0; k < 6; ++k) {
        Mdp m = testutil::random_mdp(rng, 5, 3);
        auto g = DiscountFunction::constant(Rational(7, 10));
        StaticPolicy opt = optimal_policy<Rational>(m, Rational(7, 10)).policy;
        auto report = verify_equilibrium(m, g, DynamicPolicy{{}, opt}, Rational(0), {.exact_arithmetic = true});
        CHECK(report.passed);
        CHECK(*report.max_slack_exact == 0);
        // Numeric path agrees up to float noise.
        auto numeric = verify_equilibrium(m, g, DynamicPolicy{{}, opt}, Rational(0));
        CHECK(numeric.passed);
        CHECK(numeric.max_slack <= 1e-10);
    }
}

TEST_CASE("verify: the two-phase worked example, pass and fail") {
    Mdp m = cycle_vs_steady_mdp();
    auto g = DiscountFunction::two_phase(Rational(1, 10), Rational(4, 5), 0);
    StaticPolicy tail = optimal_policy<Rational>(m, Rational(4, 5)).policy;
    StaticPolicy exit_first = tail;
    exit_first.choice[0] = m.action_index(0, "exit");
    DynamicPolicy good{{exit_first}, tail};
    auto pass = verify_equilibrium(m, g, good, Rational(0), {.exact_arithmetic = true});
    CHECK(pass.passed);
    CHECK(*pass.max_slack_exact == 0);

    // Swapping player 0 to the self-loop opens a deviation worth exactly
    // 13/3 - 136/33 = 7/33 at (player 0, hub).
    StaticPolicy stay_first = tail;
    stay_first.choice[0] = m.action_index(0, "stay");
    DynamicPolicy bad{{stay_first}, tail};
    auto fail = verify_equilibrium(m, g, bad, Rational(0), {.exact_arithmetic = true});
    CHECK_FALSE(fail.passed);
    REQUIRE(fail.worst() != nullptr);
    CHECK(fail.worst()->player == 0);
    CHECK(fail.worst()->state == 0);
    CHECK(*fail.max_slack_exact == Rational(7, 33));

    // The deviation gain matches a 100-step truncated enumeration of the
    // deviating trajectory.
    double u_exit = testutil::truncated_deviation_value(m, bad, 0, 0, exit_first, 0.1, 100);
    double u_stay = testutil::truncated_value(m, bad, 0, 0, 0.1, 100);
    CHECK(u_exit - u_stay == doctest::Approx(7.0 / 33.0).epsilon(1e-9));
}

TEST_CASE("verify: recursion agrees with truncated one-shot-deviation enumeration (property)") {
    std::mt19937_64 rng(71);
    for (int k = 0; k < 6; ++k) {
        Mdp m = testutil::random_mdp(rng, 4, 3);
        auto g = DiscountFunction::table({Rational(1, 5), Rational(7, 10), Rational(2, 5)}, Rational(3, 5));
        DynamicPolicy dp;
        for (int t = 0; t < 3; ++t) dp.prefix.push_back(testutil::random_policy(rng, m));
        dp.tail = testutil::random_policy(rng, m);
        auto report = verify_equilibrium(m, g, dp, Rational(0));
        // Cross-check every reported slack for prefix players against the
        // brute enumeration of all one-shot deviations.
        const int K = 100;
        double gamma_max = 0.7;
        double tol = to_double(m.reward_bound()) * std::pow(gamma_max, K) / (1 - gamma_max) + 1e-7;
        for (const auto& entry : report.slacks) {
            if (entry.player >= dp.switch_time()) continue;
            double base = testutil::truncated_value(m, dp, entry.player, entry.state,
                                                    to_double(g(BigInt(entry.player))), K);
            double best = base;
            StaticPolicy dev = dp.at(entry.player);
            for (int a = 0; a < m.num_actions(entry.state); ++a) {
                dev.choice[std::size_t(entry.state)] = a;
                best = std::max(best, testutil::truncated_deviation_value(m, dp, entry.player, entry.state, dev,
                                                                          to_double(g(BigInt(entry.player))), K));
            }
            CHECK(std::abs((best - base) - entry.slack) <= tol);
        }
    }
}

TEST_CASE("verify: tail exactness certification with and without the degenerate set") {
    Mdp m = crossing_mdp();
    GammaSet gs = compute_gamma_set(m);
    auto g = DiscountFunction::geometric_approach(Rational(4, 5), Rational(1, 5), Rational(1, 2));
    DynamicPolicy dp = compute_exact_spe(m, g, gs);

    auto plain = verify_equilibrium(m, g, dp, Rational(0), {.exact_arithmetic = true});
    CHECK(plain.passed);
    CHECK_FALSE(plain.tail_exactness_certified);

    VerifyOptions with_gs;
    with_gs.exact_arithmetic = true;
    with_gs.gamma_set = &gs;
    auto certified = verify_equilibrium(m, g, dp, Rational(0), with_gs);
    CHECK(certified.passed);
    CHECK(certified.tail_exactness_certified);

    // A tail range that straddles the degenerate point cannot be certified:
    // down-step tails cover [0, gamma], which contains 1/2.
    auto wide = DiscountFunction::down_step(Rational(3, 5), 2);
    StaticPolicy take{{0, 0, 0}};
    DynamicPolicy dp2 = construct_with_tail<Rational>(m, wide, take, 2);
    VerifyOptions wide_opts;
    wide_opts.gamma_set = &gs;
    auto straddles = verify_equilibrium(m, wide, dp2, Rational(1), wide_opts);
    CHECK_FALSE(straddles.tail_exactness_certified);
}

TEST_CASE("verify: monotone in eps") {
    Mdp m = crossing_mdp();
    auto g = DiscountFunction::down_step(Rational(1, 2), 3);
    DynamicPolicy dp{{}, StaticPolicy{{0, 0, 0}}};
    for (const auto& eps : {Rational(0), Rational(1, 100), Rational(1, 10), Rational(1)}) {
        auto weak = verify_equilibrium(m, g, dp, eps);
        auto strong = verify_equilibrium(m, g, dp, eps + 1);
        if (weak.passed) CHECK(strong.passed);
    }
}

TEST_CASE("continuity bound: closed-form case and random sweep") {
    Mdp loop({"s"}, {{ActionSpec{"a", 1, {Rational(1)}}}}, 0);
    StaticPolicy pi{{0}};
    auto c = continuity_bound_check(loop, pi, 0.5, 0.6);
    CHECK(c.lhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(2.0 * 1 * 1 * 0.1 / (std::pow(0.4, 3) * 0.5)).epsilon(1e-12));
    CHECK(c.holds);

    auto same = continuity_bound_check(loop, pi, 0.3, 0.3);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);
    CHECK(same.holds);

    std::mt19937_64 rng(73);
    for (int k = 0; k < 200; ++k) {
        Mdp m = testutil::random_mdp(rng, 5, 3);
        StaticPolicy p = testutil::random_policy(rng, m);
        double a = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
        double b = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
        CHECK(continuity_bound_check(m, p, a, b).holds);
    }
}

TEST_CASE("preference reversal report") {
    auto r = preference_reversal_demo();
    CHECK(r.early_value_myopic == doctest::Approx(42.1875).epsilon(1e-9));
    CHECK(r.late_value_myopic == doctest::Approx(110 * std::pow(0.75, 4)).epsilon(1e-9));
    CHECK(r.early_value_farsighted == doctest::Approx(85.7375).epsilon(1e-9));
    CHECK(r.late_value_farsighted == doctest::Approx(110 * std::pow(0.95, 4)).epsilon(1e-9));
    CHECK(r.myopic_prefers_early);
    CHECK(r.farsighted_prefers_late);
    CHECK(r.reversal);
    CHECK(r.plan_abandoned_at_step_one);
    CHECK(r.early_value_at_step_one == doctest::Approx(56.25).epsilon(1e-12));
}
