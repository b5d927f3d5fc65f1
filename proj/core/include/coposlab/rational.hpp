#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace coposlab {

// Arbitrary-precision rational. gmp keeps mpq_class canonical (gcd 1,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

// Exact binary value of a finite double.
Rational rational_from_double(double x);

// Renders "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

// Accepts "p", "p/q" and "-p/q"; throws std::invalid_argument otherwise.
Rational parse_rational(const std::string& s);

double to_double(const Rational& q);

bool fits_int64(const Integer& z);
std::int64_t to_int64(const Integer& z);

}  // namespace coposlab
