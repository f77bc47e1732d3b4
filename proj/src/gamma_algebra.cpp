#include "tvmdp/gamma_algebra.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "tvmdp/solvers.hpp"

namespace tvmdp {

namespace {

// Gaussian elimination over the field of rational functions.
std::vector<RationalFunction> solve_symbolic(std::vector<std::vector<RationalFunction>> a,
                                             std::vector<RationalFunction> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row)
            if (!a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)].is_zero()) {
                pivot = row;
                break;
            }
        if (pivot < 0) throw std::runtime_error("singular symbolic system; malformed transition rows");
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
        const RationalFunction& diag = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int row = col + 1; row < n; ++row) {
            RationalFunction factor = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] / diag;
            if (factor.is_zero()) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
                    a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -
                    factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(row)] = b[static_cast<std::size_t>(row)] - factor * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<RationalFunction> x(static_cast<std::size_t>(n));
    for (int row = n - 1; row >= 0; --row) {
        RationalFunction acc = b[static_cast<std::size_t>(row)];
        for (int j = row + 1; j < n; ++j)
            acc = acc - a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(row)] = acc / a[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
    }
    return x;
}

std::string values_key(const std::vector<RationalFunction>& values) {
    std::string key;
    for (const auto& v : values) {
        key += v.to_string();
        key += ';';
    }
    return key;
}

// Sign (-1, 0, +1) of a rational function at the algebraic point isolated by
// (interval, witness). The function's denominator must have no roots in
// [0,1), so its sign there is its sign at 0.
int sign_at_point(const RationalFunction& f, const RootInterval& interval, const Polynomial& witness) {
    if (f.is_zero()) return 0;
    int den_sign = f.den()(Rational(0)) > 0 ? 1 : -1;
    return sign_at_root(f.num(), interval, witness) * den_sign;
}

// Exact one-step optimality of `policy` at the isolated point: no action
// improves on the policy's own value anywhere.
bool optimal_at_point(const Mdp& mdp, const StaticPolicy& policy, const std::vector<RationalFunction>& values,
                      const RootInterval& interval, const Polynomial& witness) {
    const RationalFunction gamma = RationalFunction::variable();
    for (int s = 0; s < mdp.num_states(); ++s) {
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            if (a == policy(s)) continue;
            const auto& act = mdp.action(s, a);
            RationalFunction q = RationalFunction::constant(act.reward);
            RationalFunction mix;
            for (int j = 0; j < mdp.num_states(); ++j)
                if (act.next[static_cast<std::size_t>(j)] != 0)
                    mix = mix + RationalFunction::constant(act.next[static_cast<std::size_t>(j)]) *
                                    values[static_cast<std::size_t>(j)];
            q = q + gamma * mix;
            RationalFunction gap = values[static_cast<std::size_t>(s)] - q;
            if (sign_at_point(gap, interval, witness) < 0) return false;
        }
    }
    return true;
}

// Do two isolated roots denote the same real number?
bool same_root(const GammaPoint& a, const GammaPoint& b) {
    if (a.interval.exact && b.interval.exact) return a.interval.lo == b.interval.lo;
    if (a.interval.exact) return b.interval.contains(a.interval.lo) && b.witness_poly(a.interval.lo) == 0;
    if (b.interval.exact) return a.interval.contains(b.interval.lo) && a.witness_poly(b.interval.lo) == 0;
    Rational lo = std::max(a.interval.lo, b.interval.lo);
    Rational hi = std::min(a.interval.hi, b.interval.hi);
    if (lo >= hi) return false;
    Polynomial g = Polynomial::gcd(a.witness_poly, b.witness_poly);
    if (g.degree() < 1) return false;
    SturmChain chain(g);
    return chain.count_roots(lo, hi) > 0;
}

bool disjoint(const GammaPoint& a, const GammaPoint& b) {
    return a.interval.hi < b.interval.lo || b.interval.hi < a.interval.lo ||
           (a.interval.exact && b.interval.exact && a.interval.lo != b.interval.lo);
}

}  // namespace

std::vector<RationalFunction> value_rational_all(const Mdp& mdp, const StaticPolicy& policy) {
    require_policy_valid(mdp, policy, "value_rational");
    const int n = mdp.num_states();
    const RationalFunction gamma = RationalFunction::variable();
    std::vector<std::vector<RationalFunction>> a(static_cast<std::size_t>(n),
                                                 std::vector<RationalFunction>(static_cast<std::size_t>(n)));
    std::vector<RationalFunction> b(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const auto& act = mdp.action(s, policy(s));
        b[static_cast<std::size_t>(s)] = RationalFunction::constant(act.reward);
        for (int j = 0; j < n; ++j) {
            RationalFunction entry;
            if (s == j) entry = RationalFunction::constant(1);
            if (act.next[static_cast<std::size_t>(j)] != 0)
                entry = entry - gamma * RationalFunction::constant(act.next[static_cast<std::size_t>(j)]);
            a[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = entry;
        }
    }
    return solve_symbolic(std::move(a), std::move(b));
}

RationalFunction value_rational(const Mdp& mdp, const StaticPolicy& policy, int state) {
    if (state < 0 || state >= mdp.num_states()) throw std::invalid_argument("value_rational: state out of range");
    return value_rational_all(mdp, policy)[static_cast<std::size_t>(state)];
}

RationalFunction h_function(const Mdp& mdp, const StaticPolicy& p1, const StaticPolicy& p2, int state) {
    if (state < 0 || state >= mdp.num_states()) throw std::invalid_argument("h_function: state out of range");
    auto v1 = value_rational_all(mdp, p1);
    auto v2 = value_rational_all(mdp, p2);
    return v1[static_cast<std::size_t>(state)] - v2[static_cast<std::size_t>(state)];
}

bool policies_equivalent(const Mdp& mdp, const StaticPolicy& p1, const StaticPolicy& p2) {
    require_policy_valid(mdp, p1, "policies_equivalent");
    require_policy_valid(mdp, p2, "policies_equivalent");
    if (p1 == p2) return true;
    auto v1 = value_rational_all(mdp, p1);
    auto v2 = value_rational_all(mdp, p2);
    for (int s = 0; s < mdp.num_states(); ++s)
        if (!(v1[static_cast<std::size_t>(s)] == v2[static_cast<std::size_t>(s)])) return false;
    return true;
}

bool GammaSet::contains(const Rational& gamma) const {
    for (const auto& p : points)
        if (p.interval.exact ? p.interval.lo == gamma : (p.interval.lo <= gamma && gamma <= p.interval.hi)) return true;
    return false;
}

void GammaSet::refine(const Rational& target_width) {
    for (auto& p : points) refine_root(p.interval, p.witness_poly, target_width);
}

GammaSet compute_gamma_set(const Mdp& mdp, const GammaOptions& options) {
    // Policy product within the enumeration cap?
    double count = 1;
    for (int s = 0; s < mdp.num_states(); ++s) count *= static_cast<double>(mdp.num_actions(s));
    if (count > static_cast<double>(options.policy_cap))
        throw EnumerationCapExceeded(
            "degenerate-point computation would enumerate " + std::to_string(count) +
            " policies (cap " + std::to_string(options.policy_cap) +
            "); use the eps-SPE pipeline, which never needs the degenerate set");

    // Enumerate all policies, grouped by exact value-function equivalence.
    struct Group {
        StaticPolicy representative;
        std::vector<RationalFunction> values;
    };
    std::vector<Group> groups;
    std::map<std::string, std::size_t> group_index;
    StaticPolicy pi{std::vector<int>(static_cast<std::size_t>(mdp.num_states()), 0)};
    for (bool done = false; !done;) {
        auto values = value_rational_all(mdp, pi);
        std::string key = values_key(values);
        if (group_index.emplace(key, groups.size()).second) groups.push_back(Group{pi, std::move(values)});
        // Odometer step.
        done = true;
        for (int s = 0; s < mdp.num_states(); ++s) {
            auto& c = pi.choice[static_cast<std::size_t>(s)];
            if (++c < mdp.num_actions(s)) {
                done = false;
                break;
            }
            c = 0;
        }
    }

    GammaSet out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            // Candidate points must equalize the two value functions at
            // every state, i.e. be common roots of all difference
            // numerators. States with identical values impose nothing.
            Polynomial common;
            bool first = true;
            bool impossible = false;
            for (int s = 0; s < mdp.num_states() && !impossible; ++s) {
                RationalFunction diff =
                    groups[i].values[static_cast<std::size_t>(s)] - groups[j].values[static_cast<std::size_t>(s)];
                if (diff.is_zero()) continue;
                if (first) {
                    common = diff.num();
                    first = false;
                } else {
                    common = Polynomial::gcd(common, diff.num());
                }
                if (common.degree() < 1) impossible = true;
            }
            if (first || impossible) continue;
            for (const IsolatedRoot& root : isolate_roots(common, Rational(0), Rational(1))) {
                if (!optimal_at_point(mdp, groups[i].representative, groups[i].values, root.interval, root.witness))
                    continue;
                GammaPoint candidate{root.interval, root.witness, groups[i].representative,
                                     groups[j].representative};
                bool duplicate = false;
                for (auto& existing : out.points) {
                    if (same_root(existing, candidate)) {
                        duplicate = true;
                        break;
                    }
                    // Distinct roots: shrink until the intervals no longer
                    // overlap, so the set stays disjoint.
                    while (!disjoint(existing, candidate)) {
                        Rational w = existing.interval.width();
                        refine_root(existing.interval, existing.witness_poly, w == 0 ? Rational(1) : w / 2);
                        Rational w2 = candidate.interval.width();
                        refine_root(candidate.interval, candidate.witness_poly, w2 == 0 ? Rational(1) : w2 / 2);
                    }
                }
                if (!duplicate) out.points.push_back(std::move(candidate));
            }
        }
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const GammaPoint& a, const GammaPoint& b) { return a.interval.lo < b.interval.lo; });
    out.refine(Rational(1, 16777216));
    return out;
}

Rational min_gap(GammaSet& gs) {
    // Consecutive gaps among {0} u points u {1}; a degenerate point exactly
    // at 0 coincides with the anchor and contributes no zero-width pair.
    auto spacing = [&]() {
        Rational best(1);
        Rational prev_hi(0);
        for (const auto& p : gs.points) {
            if (p.interval.exact && p.interval.lo == 0) continue;
            Rational gap = p.interval.lo - prev_hi;
            if (gap < best) best = gap;
            prev_hi = p.interval.hi;
        }
        Rational last = 1 - prev_hi;
        if (last < best) best = last;
        return best;
    };
    if (gs.points.empty()) return Rational(1);
    // Shrink intervals until each is narrower than a quarter of the
    // smallest inter-interval spacing, then tighten a little further so the
    // reported bound hugs the true gap.
    for (int round = 0; round < 64; ++round) {
        Rational target = spacing() / 4;
        if (target <= 0) target = Rational(1, 1024);
        bool all_ok = true;
        for (const auto& p : gs.points)
            if (!p.interval.exact && p.interval.width() >= target) all_ok = false;
        if (all_ok) break;
        gs.refine(target);
    }
    gs.refine(Rational(1, 1024));
    Rational bound = spacing();
    return bound < 0 ? Rational(0) : bound;
}

SeparationBound separation_bound(int n, int m, long b) {
    if (n < 1 || m < 1 || b < 1) throw std::invalid_argument("separation_bound needs n, m, b >= 1");
    BigInt nm(static_cast<long>(n) * static_cast<long>(m));
    BigInt n5;
    mpz_ui_pow_ui(n5.get_mpz_t(), static_cast<unsigned long>(n), 5);
    if (!n5.fits_ulong_p()) throw std::overflow_error("separation_bound: n^5 exponent too large");
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), nm.get_mpz_t(), n5.get_ui());
    Rational log_nm = nm == 1 ? Rational(0) : log2_upper(Rational(nm), 64);
    SeparationBound out;
    out.log2_value = Rational(-b) * Rational(power) * log_nm;
    out.n = n;
    out.m = m;
    out.b = b;
    out.heuristic_small_instance = n < 3;
    return out;
}

SeparationBound separation_bound(const Mdp& mdp) {
    return separation_bound(mdp.num_states(), mdp.distinct_action_count(), static_cast<long>(mdp.max_entry_bits()));
}

}  // namespace tvmdp
