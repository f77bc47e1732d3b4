#pragma once

#include "tvmdp/polynomial.hpp"

namespace tvmdp {

/// Ratio of two polynomials with exact rational coefficients, kept in
/// canonical reduced form: gcd(num, den) is constant and the denominator is
/// primitive with positive leading coefficient. Equality of canonical forms
/// is equality of functions.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::constant(1)) {}
    RationalFunction(Polynomial num, Polynomial den);
    static RationalFunction from_polynomial(Polynomial p);
    static RationalFunction constant(const Rational& c);
    /// The identity function x (evaluation variable).
    static RationalFunction variable();

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

    /// Evaluation; throws std::domain_error at a pole.
    Rational operator()(const Rational& x) const;

    std::string to_string() const;

private:
    void reduce();
    Polynomial num_;
    Polynomial den_;
};

}  // namespace tvmdp
