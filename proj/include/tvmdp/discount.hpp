#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tvmdp/rational.hpp"

namespace tvmdp {

struct ConstantDiscount {
    Rational gamma;
};

/// gamma while t <= step, then 0 forever. The step is an arbitrary-precision
/// integer; its binary encoding is what makes the start-action decision
/// problem hard, so it is never assumed small.
struct DownStepDiscount {
    Rational gamma;
    BigInt step;
};

/// first while t <= step, then second forever.
struct TwoPhaseDiscount {
    Rational first;
    Rational second;
    BigInt step;
};

/// g(t) = limit - amplitude * ratio^t, clamped from below at 0. The limit
/// may be 1 (approached from below when amplitude > 0).
struct GeometricApproachDiscount {
    Rational limit;
    Rational amplitude;
    Rational ratio;  // in (0,1)
};

/// Explicit head values followed by a constant tail.
struct TableDiscount {
    std::vector<Rational> values;
    Rational tail;
};

/// A member of one of the supported discount-function families
/// g: N -> [0,1). Only families with analytically certifiable convergence
/// are representable; a black-box g admits no sound convergence oracle.
class DiscountFunction {
public:
    using Variant =
        std::variant<ConstantDiscount, DownStepDiscount, TwoPhaseDiscount, GeometricApproachDiscount, TableDiscount>;

    /// Validates parameter ranges (all values in [0,1), ratio in (0,1), ...).
    explicit DiscountFunction(Variant v);

    static DiscountFunction constant(Rational gamma);
    static DiscountFunction down_step(Rational gamma, BigInt step);
    static DiscountFunction two_phase(Rational first, Rational second, BigInt step);
    static DiscountFunction geometric_approach(Rational limit, Rational amplitude, Rational ratio);
    static DiscountFunction table(std::vector<Rational> values, Rational tail);

    /// g(t), exact. t >= 0.
    Rational operator()(const BigInt& t) const;

    /// g(t) in floating point. For the geometric family this computes the
    /// power in doubles (the exact value's bit size grows linearly in t);
    /// the step families are exact either way.
    double eval_double(const BigInt& t) const;

    /// lim_{t->inf} g(t), exact, in [0,1].
    Rational limit() const;

    /// Bit size of the parameter encoding (step times count in binary).
    std::size_t encoding_bits() const;

    const Variant& data() const { return v_; }
    std::string family_name() const;

private:
    Variant v_;
};

/// Analytic convergence certificate: |g(t) - g(T)| <= delta for all t >= T.
struct ConvergenceCertificate {
    Rational delta;
    BigInt time;
    std::string family;
};

/// The smallest analytically certified T such that |g(t) - g(T)| <= delta
/// for every t >= T. Minimal for the step and table families; for the
/// geometric family the certified bound 2*|amplitude|*ratio^T covers
/// two-sided deviation around g(T), so T may overshoot the true minimum.
/// Requires delta > 0.
///
/// Cost per family (the oracle's runtime alpha and growth beta, as functions
/// of the encoding size |g| and the threshold's bit size): constant — O(1)
/// and T = 0; step families — O(|g|) comparisons and T <= step + 1, i.e.
/// beta = 2^O(|g|) since the step is binary-encoded; geometric —
/// T = O(log(amplitude/delta) / -log(ratio)), linear in the threshold's bit
/// size; table — a linear scan of the materialized head.
ConvergenceCertificate convergence_oracle(const DiscountFunction& g, const Rational& delta);

/// Same contract with the threshold given as log2(delta), for thresholds far
/// too small to materialize. The returned T may be conservative (larger) for
/// the geometric family but never unsound.
BigInt convergence_time_log2(const DiscountFunction& g, const Rational& log2_delta);

/// g(t) in the requested scalar type: exact for Rational, float-native for
/// double.
template <typename S>
S discount_at(const DiscountFunction& g, const BigInt& t);

template <>
inline double discount_at<double>(const DiscountFunction& g, const BigInt& t) {
    return g.eval_double(t);
}

template <>
inline Rational discount_at<Rational>(const DiscountFunction& g, const BigInt& t) {
    return g(t);
}

}  // namespace tvmdp
