#pragma once

#include <cstdint>

#include "tvmdp/discount.hpp"
#include "tvmdp/errors.hpp"
#include "tvmdp/mdp.hpp"

namespace tvmdp {

/// A start-action decision instance: does some subgame perfect equilibrium
/// of (mdp, discount) pick the flagged action first at the start state?
struct SpeStartInstance {
    Mdp mdp;
    DiscountFunction discount;
    int flagged_action = 0;
    /// States below this index belong to the original instance; the exit and
    /// sink states appended by the gadget come after.
    int original_state_count = 0;
};

/// Transforms a finite-horizon greedy-optimality instance (constant gamma,
/// flagged start action, horizon T encoded in binary) into a start-action
/// instance: every original state gains an exit action paying U + 1 into a
/// fresh exit state whose only action pays -2(U+1)/gamma into an absorbing
/// sink, with U = max |R| / (1 - gamma), and the discount becomes a
/// down-step at T - 1. The first fully myopic player then must exit, every
/// earlier player must not, and backward induction over the remaining
/// players reproduces the finite-horizon recursion exactly. Requires
/// gamma in (0,1) and T >= 1.
SpeStartInstance build_gadget(const Mdp& mdp, const Rational& gamma, const BigInt& horizon, int flagged_action);

enum class SpeStartMethod {
    /// Exact backward induction with full argmax sets; every equilibrium
    /// start action is found, and the reported equilibria are re-certified
    /// by the independent one-shot-deviation verifier.
    brute,
    /// Single construction pass with the fixed tie-break; may answer no on
    /// yes-instances that need a different tie choice (heuristic).
    constructed,
};

/// Answers the start-action question for a gadget instance. The brute
/// method requires the switch time to fit the horizon cap.
bool answer_spe_start(const SpeStartInstance& instance, SpeStartMethod method,
                      std::uint64_t horizon_cap = kDefaultHorizonCap);

/// Computational check of the two dominance facts the gadget is built on.
struct DominanceReport {
    /// Exit is strictly suboptimal for every discounting player at every
    /// original state; this is the smallest margin observed.
    Rational min_exit_slack_discounting_players;
    bool exit_dominated_for_discounting_players = false;
    /// Exit strictly beats every original action on immediate reward for the
    /// first myopic player.
    bool exit_dominant_for_first_myopic_player = false;
};

DominanceReport check_gadget_dominance(const SpeStartInstance& instance,
                                       std::uint64_t horizon_cap = kDefaultHorizonCap);

}  // namespace tvmdp
