#pragma once

#include <cstdint>
#include <vector>

#include "tvmdp/errors.hpp"
#include "tvmdp/mdp.hpp"
#include "tvmdp/rational_function.hpp"

namespace tvmdp {

/// V^pi(state) as an exact rational function of the discount factor,
/// obtained by solving (I - gamma * P_pi) V = r_pi symbolically. Numerator
/// and denominator degrees are at most |S|; the denominator has no roots in
/// [0,1).
RationalFunction value_rational(const Mdp& mdp, const StaticPolicy& policy, int state);

/// All states at once (one symbolic solve).
std::vector<RationalFunction> value_rational_all(const Mdp& mdp, const StaticPolicy& policy);

/// The difference V^p1(state) - V^p2(state), reduced.
RationalFunction h_function(const Mdp& mdp, const StaticPolicy& p1, const StaticPolicy& p2, int state);

/// One certified degenerate discount factor: the unique root of
/// witness_poly inside `interval` (possibly an exact rational point), at
/// which both witness policies are optimal yet not equivalent.
struct GammaPoint {
    RootInterval interval;
    Polynomial witness_poly;  // square-free
    StaticPolicy witness_first;
    StaticPolicy witness_second;
};

/// The finite set of degenerate discount factors in [0,1), as disjoint
/// isolating intervals in increasing order.
struct GammaSet {
    std::vector<GammaPoint> points;

    bool contains(const Rational& gamma) const;
    /// Narrows every interval below the target width.
    void refine(const Rational& target_width);
};

struct GammaOptions {
    std::uint64_t policy_cap = kDefaultPolicyEnumerationCap;
};

/// Enumerates static policies up to value-function equivalence, isolates the
/// common roots of the pairwise difference functions, and certifies each
/// candidate by exact optimality checks at the root. Throws
/// EnumerationCapExceeded when the policy product exceeds the cap (the
/// eps-SPE pipeline never needs this computation).
GammaSet compute_gamma_set(const Mdp& mdp, const GammaOptions& options = {});

/// Exact rational lower bound on the smallest pairwise distance among the
/// degenerate points together with 0 and 1. Refines the set's isolating
/// intervals in place.
Rational min_gap(GammaSet& gs);

/// log2 of the closed-form worst-case separation bound, exact. The bound
/// underflows any fixed-precision scalar, so only its log is materialized.
struct SeparationBound {
    Rational log2_value;
    int n = 0;
    int m = 0;
    long b = 0;
    /// The derivation assumes large instances; below |S| = 3 the closed form
    /// is outside its stated regime and the output is only indicative.
    bool heuristic_small_instance = false;
};

/// D = (n*m)^(-b*(n*m)^(n^5)) in log space: log2(D) = -b*(n*m)^(n^5)*log2(n*m),
/// with the log2(n*m) factor replaced by a tight rational upper bound (exact
/// for powers of two) so that the result never overstates D.
SeparationBound separation_bound(int n, int m, long b);

/// Convenience: the bound instantiated with an MDP's own n, m, b.
SeparationBound separation_bound(const Mdp& mdp);

}  // namespace tvmdp
