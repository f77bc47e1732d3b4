#pragma once

#include "tvmdp/mdp.hpp"

namespace tvmdp {

/// A single choice at the start: reward 100 three steps ahead ("early") or
/// 110 four steps ahead ("late"). Under constant discounting the ordering of
/// the two options never flips over time; a drop from 0.95 to 0.75 flips it.
Mdp two_option_delay_mdp();

/// Three states: a hub with a small self-loop reward (4), a two-step cycle
/// through a partner state paying 12 on return, and an exit to a steady
/// state paying 3 forever (the exit action itself pays 4). Myopic agents
/// (gamma = 0.1) hold the hub self-loop, farsighted agents (gamma = 0.8)
/// ride the cycle, and the equilibrium of (0.1, 0.8, 0.8, ...) exits.
Mdp cycle_vs_steady_mdp();

/// Two actions whose values cross once: take 1 now, or wait one step for 2.
/// The optimal choice flips at gamma = 1/2.
Mdp crossing_mdp();

/// Crossing with a two-step delay for a reward of 3: values 1 versus
/// 3*gamma^2, crossing at 1/sqrt(3).
Mdp crossing_mdp_squared();

/// Two independent crossings in one instance (at 1/2 and at 1/sqrt(3)).
Mdp double_crossing_mdp();

}  // namespace tvmdp
