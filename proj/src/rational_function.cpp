#include "tvmdp/rational_function.hpp"

#include <stdexcept>

namespace tvmdp {

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    reduce();
}

RationalFunction RationalFunction::from_polynomial(Polynomial p) {
    return RationalFunction(std::move(p), Polynomial::constant(1));
}

RationalFunction RationalFunction::constant(const Rational& c) { return from_polynomial(Polynomial::constant(c)); }

RationalFunction RationalFunction::variable() { return from_polynomial(Polynomial::variable()); }

void RationalFunction::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(1);
        return;
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() >= 1) {
        num_ = num_.divide_exact(g);
        den_ = den_.divide_exact(g);
    }
    // Normalize: denominator primitive with positive leading coefficient.
    Polynomial dp = den_.primitive();
    if (dp.leading() < 0) dp = -dp;
    // den_ = dp * scale => scale = den.leading / dp.leading.
    Rational scale = den_.leading() / dp.leading();
    den_ = dp;
    num_ = num_ * (1 / scale);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const { return *this + (-o); }

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw std::domain_error("division by the zero rational function");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}

Rational RationalFunction::operator()(const Rational& x) const {
    Rational d = den_(x);
    if (d == 0) throw std::domain_error("rational function evaluated at a pole");
    return num_(x) / d;
}

std::string RationalFunction::to_string() const {
    if (den_ == Polynomial::constant(1)) return num_.to_string();
    return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

}  // namespace tvmdp
