#pragma once

#include <vector>

#include "tvmdp/rational.hpp"

namespace tvmdp {

/// Dense univariate polynomial with exact rational coefficients, stored
/// low degree first with trailing zeros trimmed.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);
    static Polynomial constant(const Rational& c);
    static Polynomial variable();  // x

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    const Rational& leading() const;
    Rational coefficient(std::size_t k) const;

    Rational operator()(const Rational& x) const;
    double operator()(double x) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rational& c) const;
    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

    Polynomial derivative() const;

    /// Quotient and remainder over the rationals; divisor must be nonzero.
    static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r);

    /// Exact division; throws std::logic_error if the remainder is nonzero.
    Polynomial divide_exact(const Polynomial& b) const;

    /// Scales by a positive rational so the coefficients become coprime
    /// integers; the sign of the polynomial is preserved.
    Polynomial primitive() const;

    /// Greatest common divisor, returned primitive with positive leading
    /// coefficient (1 for coprime inputs).
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    /// P / gcd(P, P'): same roots, all simple.
    Polynomial square_free_part() const;

    std::string to_string() const;  // human-readable, for diagnostics

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Sturm chain of a polynomial; counts distinct real roots in an interval.
class SturmChain {
public:
    explicit SturmChain(const Polynomial& p);

    int sign_variations(const Rational& x) const;

    /// Number of distinct roots in (lo, hi]; requires p(lo) != 0.
    int count_roots(const Rational& lo, const Rational& hi) const;

    const Polynomial& polynomial() const { return chain_.front(); }

private:
    std::vector<Polynomial> chain_;
};

/// An isolated real root: either an exact rational point (lo == hi) or an
/// open interval (lo, hi) with rational endpoints, p(lo) != 0 != p(hi),
/// containing exactly one root of the (square-free) witness polynomial.
struct RootInterval {
    Rational lo;
    Rational hi;
    bool exact = false;

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return exact ? x == lo : (lo < x && x < hi); }
};

/// An isolated root together with the square-free polynomial that isolates
/// it (rational roots found along the way are deflated out of later
/// witnesses, so each interval has exactly one witness root even at its
/// endpoints).
struct IsolatedRoot {
    RootInterval interval;
    Polynomial witness;
};

/// Isolates all distinct real roots of p lying in [lo, hi), returned in
/// increasing order. Roots at hi are excluded; a root exactly at lo is
/// reported as an exact point.
std::vector<IsolatedRoot> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Bisects until the interval is exact or narrower than target_width. The
/// witness polynomial must be square-free with exactly one root inside.
void refine_root(RootInterval& iv, const Polynomial& square_free, const Rational& target_width);

/// Sign of `q` at the root isolated by (iv, witness): -1, 0, or +1, decided
/// exactly. witness must be square-free.
int sign_at_root(const Polynomial& q, RootInterval iv, const Polynomial& witness);

}  // namespace tvmdp
