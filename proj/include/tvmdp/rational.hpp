#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace tvmdp {

/// Arbitrary-precision rational scalar. All model data (rewards, transition
/// probabilities, discount parameters) is stored exactly in this type; the
/// floating-point solvers derive doubles from it on demand.
using Rational = mpq_class;

/// Arbitrary-precision integer (time steps, horizons, exponents).
using BigInt = mpz_class;

/// Parses "p/q", integer, or decimal/scientific notation ("-4.5", "1e-3")
/// into an exact rational. Throws std::invalid_argument on malformed input.
Rational rational_from_string(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q".
std::string rational_to_string(const Rational& x);

/// The exact rational value of a finite double.
Rational rational_from_double(double x);

double to_double(const Rational& x);
double to_double(const BigInt& x);

/// Bit size of a rational in lowest terms: bits(|num|) + bits(den).
std::size_t rational_bit_size(const Rational& x);

/// Directed bounds on log2(x), x > 0, returned as exact rationals with
/// denominator `grain`. Always log2_lower(x) <= log2(x) <= log2_upper(x),
/// and the bounds are tight to within 1/grain.
Rational log2_upper(const Rational& x, unsigned grain = 64);
Rational log2_lower(const Rational& x, unsigned grain = 64);

/// Sign of 2^exponent - x for exact rational exponent and x > 0. Decides
/// correctly even when the exponent is astronomically large or small.
int compare_pow2(const Rational& exponent, const Rational& x);

/// x^t for a nonnegative BigInt exponent. Throws std::overflow_error when t
/// does not fit an unsigned long (no caller evaluates that far).
Rational rational_pow(const Rational& x, const BigInt& t);

}  // namespace tvmdp
