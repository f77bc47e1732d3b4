#include "tvmdp/instances.hpp"

namespace tvmdp {

namespace {

// Deterministic transition row: probability 1 on `to`.
std::vector<Rational> row_to(int n, int to) {
    std::vector<Rational> r(static_cast<std::size_t>(n), Rational(0));
    r[static_cast<std::size_t>(to)] = 1;
    return r;
}

}  // namespace

Mdp two_option_delay_mdp() {
    // 0:s0  1..3: early chain  4..7: late chain  8: terminal
    const int n = 9;
    std::vector<std::string> states{"s0", "e1", "e2", "e3", "l1", "l2", "l3", "l4", "end"};
    std::vector<std::vector<ActionSpec>> actions(n);
    actions[0] = {ActionSpec{"early", 0, row_to(n, 1)}, ActionSpec{"late", 0, row_to(n, 4)}};
    actions[1] = {ActionSpec{"go", 0, row_to(n, 2)}};
    actions[2] = {ActionSpec{"go", 0, row_to(n, 3)}};
    actions[3] = {ActionSpec{"go", 100, row_to(n, 8)}};
    actions[4] = {ActionSpec{"go", 0, row_to(n, 5)}};
    actions[5] = {ActionSpec{"go", 0, row_to(n, 6)}};
    actions[6] = {ActionSpec{"go", 0, row_to(n, 7)}};
    actions[7] = {ActionSpec{"go", 110, row_to(n, 8)}};
    actions[8] = {ActionSpec{"stay", 0, row_to(n, 8)}};
    return Mdp(std::move(states), std::move(actions), 0);
}

Mdp cycle_vs_steady_mdp() {
    const int n = 3;
    std::vector<std::string> states{"s0", "s1", "s2"};
    std::vector<std::vector<ActionSpec>> actions(n);
    actions[0] = {ActionSpec{"stay", 4, row_to(n, 0)}, ActionSpec{"cycle", 0, row_to(n, 1)},
                  ActionSpec{"exit", 4, row_to(n, 2)}};
    actions[1] = {ActionSpec{"back", 12, row_to(n, 0)}};
    actions[2] = {ActionSpec{"stay", 3, row_to(n, 2)}};
    return Mdp(std::move(states), std::move(actions), 0);
}

Mdp crossing_mdp() {
    const int n = 3;
    std::vector<std::string> states{"c", "d", "z"};
    std::vector<std::vector<ActionSpec>> actions(n);
    actions[0] = {ActionSpec{"take", 1, row_to(n, 2)}, ActionSpec{"wait", 0, row_to(n, 1)}};
    actions[1] = {ActionSpec{"collect", 2, row_to(n, 2)}};
    actions[2] = {ActionSpec{"stay", 0, row_to(n, 2)}};
    return Mdp(std::move(states), std::move(actions), 0);
}

Mdp crossing_mdp_squared() {
    const int n = 4;
    std::vector<std::string> states{"c", "d1", "d2", "z"};
    std::vector<std::vector<ActionSpec>> actions(n);
    actions[0] = {ActionSpec{"take", 1, row_to(n, 3)}, ActionSpec{"wait", 0, row_to(n, 1)}};
    actions[1] = {ActionSpec{"go", 0, row_to(n, 2)}};
    actions[2] = {ActionSpec{"collect", 3, row_to(n, 3)}};
    actions[3] = {ActionSpec{"stay", 0, row_to(n, 3)}};
    return Mdp(std::move(states), std::move(actions), 0);
}

Mdp double_crossing_mdp() {
    const int n = 6;
    std::vector<std::string> states{"c1", "d1", "c2", "e1", "e2", "z"};
    std::vector<std::vector<ActionSpec>> actions(n);
    actions[0] = {ActionSpec{"take", 1, row_to(n, 5)}, ActionSpec{"wait", 0, row_to(n, 1)}};
    actions[1] = {ActionSpec{"collect", 2, row_to(n, 5)}};
    actions[2] = {ActionSpec{"take", 1, row_to(n, 5)}, ActionSpec{"wait", 0, row_to(n, 3)}};
    actions[3] = {ActionSpec{"go", 0, row_to(n, 4)}};
    actions[4] = {ActionSpec{"collect", 3, row_to(n, 5)}};
    actions[5] = {ActionSpec{"stay", 0, row_to(n, 5)}};
    return Mdp(std::move(states), std::move(actions), 0);
}

}  // namespace tvmdp
