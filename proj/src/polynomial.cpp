#include "tvmdp/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace tvmdp {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::variable() { return Polynomial({Rational(0), Rational(1)}); }

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Rational& Polynomial::leading() const {
    if (is_zero()) throw std::logic_error("leading coefficient of zero polynomial");
    return coeffs_.back();
}

Rational Polynomial::coefficient(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

Rational Polynomial::operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::operator()(double x) const {
    double acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

Polynomial Polynomial::operator-() const {
    std::vector<Rational> out(coeffs_);
    for (auto& c : out) c = -c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Rational& c) const {
    std::vector<Rational> out(coeffs_);
    for (auto& v : out) v *= c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Rational> out(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
    return Polynomial(std::move(out));
}

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = a.coeffs_;
    int db = b.degree();
    std::vector<Rational> quot;
    if (a.degree() >= db) quot.assign(a.degree() - db + 1, Rational(0));
    while (static_cast<int>(rem.size()) - 1 >= db) {
        while (!rem.empty() && rem.back() == 0) rem.pop_back();
        int dr = static_cast<int>(rem.size()) - 1;
        if (dr < db) break;
        Rational factor = rem.back() / b.leading();
        quot[dr - db] = factor;
        for (int i = 0; i <= db; ++i) rem[dr - db + i] -= factor * b.coeffs_[i];
        rem.pop_back();
    }
    q = Polynomial(std::move(quot));
    r = Polynomial(std::move(rem));
}

Polynomial Polynomial::divide_exact(const Polynomial& b) const {
    Polynomial q, r;
    divmod(*this, b, q, r);
    if (!r.is_zero()) throw std::logic_error("polynomial division is not exact");
    return q;
}

Polynomial Polynomial::primitive() const {
    if (is_zero()) return *this;
    // lcm of denominators, then gcd of numerators.
    BigInt den_lcm(1);
    for (const auto& c : coeffs_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    BigInt num_gcd(0);
    for (const auto& c : coeffs_) {
        BigInt scaled = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);  // positive
    scale.canonicalize();
    return *this * scale;
}

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    Polynomial x = a.primitive(), y = b.primitive();
    while (!y.is_zero()) {
        Polynomial q, r;
        divmod(x, y, q, r);
        x = y;
        y = r.primitive();
    }
    if (x.is_zero()) return x;
    x = x.primitive();
    if (x.leading() < 0) x = -x;
    return x;
}

Polynomial Polynomial::square_free_part() const {
    if (degree() <= 0) return *this;
    Polynomial g = gcd(*this, derivative());
    if (g.degree() <= 0) return this->primitive();
    return divide_exact(g).primitive();
}

std::string Polynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const Rational c = coefficient(static_cast<std::size_t>(k));
        if (c == 0) continue;
        if (!first) out << (c > 0 ? " + " : " - ");
        else if (c < 0) out << "-";
        Rational a = abs(c);
        if (a != 1 || k == 0) out << rational_to_string(a);
        if (k > 0) {
            if (a != 1) out << "*";
            out << "x";
            if (k > 1) out << "^" << k;
        }
        first = false;
    }
    return out.str();
}

SturmChain::SturmChain(const Polynomial& p) {
    Polynomial p0 = p.square_free_part();
    chain_.push_back(p0);
    if (p0.degree() >= 1) {
        chain_.push_back(p0.derivative().primitive());
        while (chain_.back().degree() >= 1) {
            Polynomial q, r;
            Polynomial::divmod(chain_[chain_.size() - 2], chain_.back(), q, r);
            if (r.is_zero()) break;
            chain_.push_back((-r).primitive());
        }
    }
}

int SturmChain::sign_variations(const Rational& x) const {
    int variations = 0;
    int prev = 0;
    for (const auto& p : chain_) {
        Rational v = p(x);
        int s = v == 0 ? 0 : (v > 0 ? 1 : -1);
        if (s != 0) {
            if (prev != 0 && s != prev) ++variations;
            prev = s;
        }
    }
    return variations;
}

int SturmChain::count_roots(const Rational& lo, const Rational& hi) const {
    if (lo >= hi) return 0;
    return sign_variations(lo) - sign_variations(hi);
}

std::vector<IsolatedRoot> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
    std::vector<IsolatedRoot> found;
    if (p.is_zero()) throw std::domain_error("cannot isolate roots of the zero polynomial");
    Polynomial w = p.square_free_part();

    auto record_exact = [&](const Rational& r, const Polynomial& witness) {
        found.push_back(IsolatedRoot{RootInterval{r, r, true}, witness});
    };
    auto deflate = [&](Polynomial poly, const Rational& root) {
        return poly.divide_exact(Polynomial({-root, Rational(1)})).primitive();
    };

    // Rational roots at the endpoints come out first: the left endpoint is
    // included in [lo, hi), the right excluded either way.
    while (w.degree() >= 1 && w(lo) == 0) {
        record_exact(lo, w);
        w = deflate(w, lo);
    }
    while (w.degree() >= 1 && w(hi) == 0) w = deflate(w, hi);
    if (w.degree() >= 1) {
        // Bisection on Sturm counts. A midpoint that happens to be a root is
        // a rational root: it is recorded exactly and deflated, and the chain
        // is rebuilt; counts of untouched segments are unaffected (the
        // removed root lies outside them).
        SturmChain chain(w);
        struct Seg {
            Rational a, b;
            int count;
        };
        std::vector<Seg> stack{{lo, hi, chain.count_roots(lo, hi)}};
        while (!stack.empty()) {
            Seg seg = stack.back();
            stack.pop_back();
            if (seg.count <= 0) continue;
            if (seg.count == 1) {
                found.push_back(IsolatedRoot{RootInterval{seg.a, seg.b, false}, w});
                continue;
            }
            Rational m = (seg.a + seg.b) / 2;
            if (w(m) == 0) {
                record_exact(m, w);
                w = deflate(w, m);
                if (w.degree() < 1) continue;
                chain = SturmChain(w);
                stack.push_back({seg.a, m, chain.count_roots(seg.a, m)});
                stack.push_back({m, seg.b, chain.count_roots(m, seg.b)});
                continue;
            }
            int left = chain.count_roots(seg.a, m);
            stack.push_back({seg.a, m, left});
            stack.push_back({m, seg.b, seg.count - left});
        }
    }

    std::sort(found.begin(), found.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) {
        return a.interval.lo != b.interval.lo ? a.interval.lo < b.interval.lo : a.interval.hi < b.interval.hi;
    });
    return found;
}

void refine_root(RootInterval& iv, const Polynomial& square_free, const Rational& target_width) {
    if (iv.exact) return;
    const Polynomial& w = square_free;
    while (iv.width() >= target_width) {
        Rational m = iv.midpoint();
        Rational vm = w(m);
        if (vm == 0) {
            iv.lo = iv.hi = m;
            iv.exact = true;
            return;
        }
        Rational va = w(iv.lo);
        if ((va > 0) != (vm > 0))
            iv.hi = m;
        else
            iv.lo = m;
    }
}

int sign_at_root(const Polynomial& q, RootInterval iv, const Polynomial& witness) {
    if (q.is_zero()) return 0;
    if (iv.exact) {
        Rational v = q(iv.lo);
        return v == 0 ? 0 : (v > 0 ? 1 : -1);
    }
    // Zero iff the root is shared: gcd(witness, q) changes sign across it.
    Polynomial g = Polynomial::gcd(witness, q);
    if (g.degree() >= 1) {
        Rational ga = g(iv.lo), gb = g(iv.hi);
        if (ga == 0 || gb == 0 || (ga > 0) != (gb > 0)) return 0;
    }
    // Otherwise shrink around the root until q is root-free on the closure,
    // where its sign is constant.
    SturmChain qchain(q);
    for (int rounds = 0; rounds < 100000; ++rounds) {
        bool clean_lo = q(iv.lo) != 0;
        bool clean_hi = q(iv.hi) != 0;
        if (clean_lo && clean_hi && qchain.count_roots(iv.lo, iv.hi) == 0) {
            Rational v = q(iv.lo);
            return v > 0 ? 1 : -1;
        }
        Rational m = iv.midpoint();
        Rational vm = witness(m);
        if (vm == 0) {
            Rational v = q(m);
            return v == 0 ? 0 : (v > 0 ? 1 : -1);
        }
        Rational va = witness(iv.lo);
        if ((va > 0) != (vm > 0))
            iv.hi = m;
        else
            iv.lo = m;
    }
    throw std::logic_error("sign_at_root: refinement did not converge");
}

}  // namespace tvmdp
