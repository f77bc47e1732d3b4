#include "tvmdp/spe.hpp"

#include <stdexcept>

namespace tvmdp {

namespace {

StaticPolicy optimal_tail(const Mdp& mdp, const DiscountFunction& g, const BigInt& time, bool exact) {
    if (exact) return optimal_policy<Rational>(mdp, g(time)).policy;
    return optimal_policy<double>(mdp, g.eval_double(time)).policy;
}

DynamicPolicy construct(const Mdp& mdp, const DiscountFunction& g, const StaticPolicy& tail, const BigInt& T,
                        const SpeOptions& options) {
    if (options.exact_arithmetic) return construct_with_tail<Rational>(mdp, g, tail, T, nullptr, options.horizon_cap);
    return construct_with_tail<double>(mdp, g, tail, T, nullptr, options.horizon_cap);
}

void require_within_cap(const BigInt& T, const SpeOptions& options, const std::string& context) {
    if (T > BigInt(static_cast<unsigned long>(options.horizon_cap)))
        throw HorizonCapExceeded(context + ": switch time " + T.get_str() + " exceeds the horizon cap " +
                                 std::to_string(options.horizon_cap));
}

}  // namespace

DynamicPolicy compute_exact_spe(const Mdp& mdp, const DiscountFunction& g, GammaSet& gamma_set,
                                const SpeOptions& options) {
    const Rational limit = g.limit();

    // Separate the limit from every isolating interval, or detect that it is
    // a degenerate point itself.
    for (auto& p : gamma_set.points) {
        if (p.interval.exact) {
            if (p.interval.lo == limit)
                throw DegenerateLimit("the discount limit " + rational_to_string(limit) +
                                      " is a degenerate point; no exact equilibrium construction is possible. "
                                      "Use the eps-SPE construction instead.");
            continue;
        }
        if (p.interval.contains(limit) && p.witness_poly(limit) == 0)
            throw DegenerateLimit("the discount limit " + rational_to_string(limit) +
                                  " is a degenerate point; no exact equilibrium construction is possible. "
                                  "Use the eps-SPE construction instead.");
        // Shrink until the limit is strictly outside, endpoints included (an
        // endpoint collision would make the boundary distance zero).
        while (p.interval.contains(limit) || p.interval.lo == limit || p.interval.hi == limit) {
            Rational w = p.interval.width();
            refine_root(p.interval, p.witness_poly, w / 2);
            if (p.interval.exact) {
                if (p.interval.lo == limit)
                    throw DegenerateLimit("the discount limit " + rational_to_string(limit) +
                                          " is a degenerate point; no exact equilibrium construction is possible. "
                                          "Use the eps-SPE construction instead.");
                break;
            }
        }
    }

    // Distance from the limit to the boundary of its degenerate-point-free
    // interval. Exact points keep a strict margin (half the distance to the
    // point), so the tail discounts never touch a degenerate value.
    BigInt T(0);
    std::optional<Rational> distance;
    for (const auto& p : gamma_set.points) {
        Rational d;
        if (p.interval.exact)
            d = abs(limit - p.interval.lo) / 2;
        else if (limit < p.interval.lo)
            d = p.interval.lo - limit;
        else
            d = limit - p.interval.hi;
        if (!distance || d < *distance) distance = d;
    }
    if (distance) {
        Rational delta = *distance / 2;
        T = convergence_oracle(g, delta).time;
    }
    require_within_cap(T, options, "compute_exact_spe");

    StaticPolicy tail = optimal_policy<Rational>(mdp, g(T)).policy;
    SpeOptions exact_options = options;
    exact_options.exact_arithmetic = true;
    return construct(mdp, g, tail, T, exact_options);
}

DynamicPolicy compute_eps_spe(const Mdp& mdp, const DiscountFunction& g, const Rational& eps, const Rational& c,
                              const SpeOptions& options) {
    if (eps <= 0) throw std::invalid_argument("compute_eps_spe: eps must be > 0");
    if (c <= 0 || c > 1) throw std::invalid_argument("compute_eps_spe: c must lie in (0,1]");
    if (g.limit() >= 1 - c)
        throw std::invalid_argument("compute_eps_spe: the discount limit must stay below 1 - c; use the "
                                    "unknown-gap construction otherwise");
    const Rational m_bound = mdp.reward_bound();
    Rational d = c;
    if (m_bound != 0) {
        Rational scaled = eps / (4 * m_bound * mdp.num_states());
        if (scaled < d) d = scaled;
    }
    Rational threshold = c * c * c * c * d;
    BigInt T = convergence_oracle(g, threshold).time;
    require_within_cap(T, options, "compute_eps_spe");
    StaticPolicy tail = optimal_tail(mdp, g, T, options.exact_arithmetic);
    return construct(mdp, g, tail, T, options);
}

DynamicPolicy compute_eps_spe_unknown_gap(const Mdp& mdp, const DiscountFunction& g, const Rational& eps,
                                          std::optional<SeparationHint> separation, const SpeOptions& options) {
    if (eps <= 0) throw std::invalid_argument("compute_eps_spe_unknown_gap: eps must be > 0");
    const Rational m_bound = mdp.reward_bound();
    const int n = mdp.num_states();

    std::optional<Rational> d_value;
    std::optional<Rational> d_log2;
    if (separation && separation->value) {
        if (*separation->value <= 0) throw std::invalid_argument("separation value must be > 0");
        d_value = *separation->value;
    } else if (separation && separation->log2_value) {
        d_log2 = *separation->log2_value;
    } else {
        try {
            GammaSet gs = compute_gamma_set(mdp);
            d_value = min_gap(gs);
        } catch (const EnumerationCapExceeded&) {
            d_log2 = separation_bound(mdp).log2_value;
        }
    }

    BigInt T;
    bool near_one;
    if (d_value) {
        Rational quarter = *d_value / 4;
        T = convergence_oracle(g, quarter).time;
        require_within_cap(T, options, "compute_eps_spe_unknown_gap");
        Rational to_one = 1 - g(T);
        Rational half = *d_value / 2;
        near_one = to_one < half;
    } else {
        T = convergence_time_log2(g, *d_log2 - 2);  // threshold D/4
        if (T > BigInt(static_cast<unsigned long>(options.horizon_cap)))
            throw HorizonCapExceeded(
                "compute_eps_spe_unknown_gap: the worst-case separation bound (log2 D = " +
                rational_to_string(*d_log2) +
                ") is so small that the convergence time exceeds the horizon cap; supply a separation "
                "hint or use compute_eps_spe with a known gap c");
        Rational to_one = 1 - g(T);
        Rational exponent = *d_log2 - 1;
        near_one = compare_pow2(exponent, to_one) > 0;  // 1 - g(T) < D/2
    }

    if (near_one) {
        // The tail of g is pinched between the largest degenerate point and
        // 1, where the optimal policy set is constant: exact branch.
        StaticPolicy tail = optimal_tail(mdp, g, T, options.exact_arithmetic);
        return construct(mdp, g, tail, T, options);
    }

    BigInt T2;
    if (d_value) {
        Rational delta = *d_value;
        if (m_bound != 0) {
            Rational d8 = *d_value / 8;
            delta = eps / (4 * m_bound * n) * d8 * d8 * d8 * d8;
        }
        T2 = convergence_oracle(g, delta).time;
    } else {
        Rational log2_delta = *d_log2;
        if (m_bound != 0) {
            Rational scale = eps / (4 * m_bound * n);
            log2_delta = log2_lower(scale) + 4 * (*d_log2 - 3);
        }
        T2 = convergence_time_log2(g, log2_delta);
    }
    if (T2 < T) T2 = T;
    require_within_cap(T2, options, "compute_eps_spe_unknown_gap");
    StaticPolicy tail = optimal_tail(mdp, g, T2, options.exact_arithmetic);
    return construct(mdp, g, tail, T2, options);
}

}  // namespace tvmdp
