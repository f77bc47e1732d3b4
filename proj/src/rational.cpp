#include "tvmdp/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tvmdp {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void bad_number(std::string_view text) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
}

}  // namespace

Rational rational_from_string(std::string_view text) {
    // Strip surrounding whitespace.
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) bad_number(text);

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        bool neg = false;
        if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
            neg = num.front() == '-';
            num.remove_prefix(1);
        }
        if (!all_digits(num) || !all_digits(den)) bad_number(text);
        BigInt numerator{std::string(num), 10};
        BigInt denominator{std::string(den), 10};
        if (denominator == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        Rational r{numerator, denominator};
        r.canonicalize();
        if (neg) r = -r;
        return r;
    }

    // [sign] digits [. digits] [e [sign] digits]
    std::string_view rest = text;
    bool neg = false;
    if (rest.front() == '-' || rest.front() == '+') {
        neg = rest.front() == '-';
        rest.remove_prefix(1);
    }
    std::string digits;
    long frac_len = 0;
    long exponent = 0;
    std::size_t i = 0;
    while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) digits += rest[i++];
    bool had_int = i > 0;
    if (i < rest.size() && rest[i] == '.') {
        ++i;
        std::size_t start = i;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) digits += rest[i++];
        frac_len = static_cast<long>(i - start);
        if (!had_int && frac_len == 0) bad_number(text);
    } else if (!had_int) {
        bad_number(text);
    }
    if (i < rest.size() && (rest[i] == 'e' || rest[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < rest.size() && (rest[i] == '-' || rest[i] == '+')) {
            eneg = rest[i] == '-';
            ++i;
        }
        std::size_t start = i;
        long e = 0;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) {
            e = e * 10 + (rest[i] - '0');
            if (e > 1000000) throw std::invalid_argument("exponent out of range: '" + std::string(text) + "'");
            ++i;
        }
        if (i == start) bad_number(text);
        exponent = eneg ? -e : e;
    }
    if (i != rest.size()) bad_number(text);

    if (digits.empty()) bad_number(text);
    BigInt mantissa(digits, 10);
    long ten_power = exponent - frac_len;
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(ten_power < 0 ? -ten_power : ten_power));
    Rational r = ten_power < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

std::string rational_to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational rational_from_double(double x) {
    Rational r(x);
    r.canonicalize();
    return r;
}

double to_double(const Rational& x) { return x.get_d(); }

double to_double(const BigInt& x) { return x.get_d(); }

std::size_t rational_bit_size(const Rational& x) {
    if (x == 0) return 1;
    return mpz_sizeinbase(x.get_num().get_mpz_t(), 2) + mpz_sizeinbase(x.get_den().get_mpz_t(), 2);
}

namespace {

// Smallest i with v <= 2^i (v >= 1).
long ceil_log2(const BigInt& v) {
    std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
    bool pow2 = mpz_scan1(v.get_mpz_t(), 0) == bits - 1;
    return pow2 ? static_cast<long>(bits) - 1 : static_cast<long>(bits);
}

// Largest i with 2^i <= v (v >= 1).
long floor_log2(const BigInt& v) { return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1; }

BigInt int_pow(const BigInt& v, unsigned e) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), v.get_mpz_t(), e);
    return out;
}

}  // namespace

Rational log2_upper(const Rational& x, unsigned grain) {
    if (x <= 0) throw std::domain_error("log2 of nonpositive value");
    BigInt pn = int_pow(x.get_num(), grain);
    BigInt pd = int_pow(x.get_den(), grain);
    // log2(x) = (log2(pn) - log2(pd)) / grain; round the numerator up.
    long i = ceil_log2(pn) - floor_log2(pd);
    Rational r(i, static_cast<long>(grain));
    r.canonicalize();
    return r;
}

Rational log2_lower(const Rational& x, unsigned grain) {
    if (x <= 0) throw std::domain_error("log2 of nonpositive value");
    BigInt pn = int_pow(x.get_num(), grain);
    BigInt pd = int_pow(x.get_den(), grain);
    long i = floor_log2(pn) - ceil_log2(pd);
    Rational r(i, static_cast<long>(grain));
    r.canonicalize();
    return r;
}

int compare_pow2(const Rational& exponent, const Rational& x) {
    if (x <= 0) throw std::domain_error("compare_pow2 needs x > 0");
    // Quick decision through integer windows: 2^floor(e) <= 2^e <= 2^ceil(e),
    // and bit lengths bracket x within one power of two.
    BigInt efl, ecl;
    mpz_fdiv_q(efl.get_mpz_t(), exponent.get_num().get_mpz_t(), exponent.get_den().get_mpz_t());
    mpz_cdiv_q(ecl.get_mpz_t(), exponent.get_num().get_mpz_t(), exponent.get_den().get_mpz_t());
    long x_lo = floor_log2(x.get_num()) - ceil_log2(x.get_den());   // 2^x_lo <= x
    long x_hi = ceil_log2(x.get_num()) - floor_log2(x.get_den());   // x <= 2^x_hi
    if (ecl < x_lo) return -1;
    if (efl > x_hi) return 1;
    // Ambiguous window: the exponent is moderate, compare exactly.
    // 2^(a/b) vs p/q  <=>  2^a * q^b vs p^b  (b > 0).
    BigInt a = exponent.get_num();
    unsigned long b = exponent.get_den().get_ui();
    if (!exponent.get_den().fits_ulong_p() || b == 0 || !a.fits_slong_p())
        throw std::overflow_error("compare_pow2: exponent too complex for exact comparison");
    long ai = a.get_si();
    BigInt qb = int_pow(x.get_den(), static_cast<unsigned>(b));
    BigInt pb = int_pow(x.get_num(), static_cast<unsigned>(b));
    BigInt lhs, rhs;
    if (ai >= 0) {
        lhs = qb << static_cast<unsigned long>(ai);
        rhs = pb;
    } else {
        lhs = qb;
        rhs = pb << static_cast<unsigned long>(-ai);
    }
    return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

Rational rational_pow(const Rational& x, const BigInt& t) {
    if (t < 0) throw std::domain_error("rational_pow: negative exponent");
    if (!t.fits_ulong_p()) throw std::overflow_error("rational_pow: exponent too large to materialize");
    unsigned long e = t.get_ui();
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), x.get_num().get_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), x.get_den().get_mpz_t(), e);
    out.canonicalize();
    return out;
}

}  // namespace tvmdp
