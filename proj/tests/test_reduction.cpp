#include <doctest.h>

#include <random>

#include "support/test_util.hpp"
#include "tvmdp/instances.hpp"
#include "tvmdp/reduction.hpp"
#include "tvmdp/solvers.hpp"

using namespace tvmdp;

TEST_CASE("gadget structure") {
    // Minimal instance: one state, one zero-reward action, gamma = 1/2.
    Mdp tiny({"s"}, {{ActionSpec{"a", 0, {Rational(1)}}}}, 0);
    auto gadget = build_gadget(tiny, Rational(1, 2), 1, 0);
    CHECK(gadget.mdp.num_states() == 3);
    CHECK(gadget.original_state_count == 1);
    // U = 0, so the exit pays 1 and the sink entry pays -2 * 1 / (1/2) = -4.
    CHECK(gadget.mdp.action(0, 1).reward == 1);
    CHECK(gadget.mdp.action(1, 0).reward == -4);
    const auto* ds = std::get_if<DownStepDiscount>(&gadget.discount.data());
    REQUIRE(ds != nullptr);
    CHECK(ds->gamma == Rational(1, 2));
    CHECK(ds->step == 0);

    // Two-option instance at gamma = 0.95: U = 110 / (1/20) = 2200.
    Mdp m = two_option_delay_mdp();
    auto g2 = build_gadget(m, Rational(19, 20), 5, 0);
    const int exit_a = g2.mdp.num_actions(0) - 1;
    CHECK(g2.mdp.action(0, exit_a).reward == 2201);
    CHECK(g2.mdp.action(g2.mdp.num_states() - 2, 0).reward == Rational(-2 * 2201 * 20, 19));
    // Rows all sum to 1 by construction (the Mdp constructor re-validates);
    // original rows are untouched.
    for (int a = 0; a < m.num_actions(0); ++a) CHECK(g2.mdp.action(0, a).reward == m.action(0, a).reward);

    CHECK_THROWS_AS(build_gadget(tiny, Rational(0), 1, 0), std::invalid_argument);
}

TEST_CASE("gadget answers match the finite-horizon test on the two-option instance") {
    Mdp m = two_option_delay_mdp();
    const int early = m.action_index(0, "early");
    const int late = m.action_index(0, "late");
    auto yes = build_gadget(m, Rational(19, 20), 5, late);
    CHECK(answer_spe_start(yes, SpeStartMethod::brute));
    CHECK(answer_spe_start(yes, SpeStartMethod::constructed));
    auto no = build_gadget(m, Rational(19, 20), 5, early);
    CHECK_FALSE(answer_spe_start(no, SpeStartMethod::brute));
    CHECK_FALSE(answer_spe_start(no, SpeStartMethod::constructed));
}

TEST_CASE("single-action instance is always a yes") {
    Mdp tiny({"s"}, {{ActionSpec{"a", 3, {Rational(1)}}}}, 0);
    for (int T = 1; T <= 4; ++T) {
        auto gadget = build_gadget(tiny, Rational(1, 2), T, 0);
        CHECK(answer_spe_start(gadget, SpeStartMethod::brute));
        auto dom = check_gadget_dominance(gadget);
        CHECK(dom.exit_dominated_for_discounting_players);
        CHECK(dom.exit_dominant_for_first_myopic_player);
        CHECK(dom.min_exit_slack_discounting_players > 0);
    }
}

TEST_CASE("ties on the original side are preserved (brute finds every start action)") {
    // Two identical actions: both are greedy-optimal at every horizon, so
    // every flagged action is a yes even though the constructed tie-break
    // only ever reports the first.
    Mdp twin({"s"}, {{ActionSpec{"a", 1, {Rational(1)}}, ActionSpec{"b", 1, {Rational(1)}}}}, 0);
    for (int flagged : {0, 1}) {
        auto gadget = build_gadget(twin, Rational(1, 2), 3, flagged);
        CHECK(solve_valit<Rational>(twin, flagged, 3, Rational(1, 2)));
        CHECK(answer_spe_start(gadget, SpeStartMethod::brute));
    }
    auto second = build_gadget(twin, Rational(1, 2), 3, 1);
    CHECK_FALSE(answer_spe_start(second, SpeStartMethod::constructed));
}

TEST_CASE("exhaustive agreement with the finite-horizon answer (property)") {
    std::mt19937_64 rng(79);
    int checked = 0;
    for (int k = 0; k < 10; ++k) {
        Mdp m = testutil::random_mdp(rng, 3, 2, /*integer_rewards=*/true);
        for (const Rational& gamma : {Rational(1, 2), Rational(3, 4)}) {
            for (int T = 1; T <= 4; ++T) {
                for (int a = 0; a < m.num_actions(m.start_state()); ++a) {
                    bool valit = solve_valit<Rational>(m, a, T, gamma);
                    auto gadget = build_gadget(m, gamma, T, a);
                    CHECK(answer_spe_start(gadget, SpeStartMethod::brute) == valit);
                    ++checked;
                }
                auto dom = check_gadget_dominance(build_gadget(m, gamma, T, 0));
                CHECK(dom.exit_dominated_for_discounting_players);
                CHECK(dom.exit_dominant_for_first_myopic_player);
            }
        }
    }
    CHECK(checked >= 40);
}
