#pragma once

#include <gmpxx.h>

#include <string>

namespace bilap {

// All certified computation runs on exact rationals. mpq_class keeps results
// canonical (denominator > 0, gcd(num, den) = 1) after every operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Exact conversion; doubles are dyadic rationals.
Rational rational_from_double(double x);

// Best rational approximation with denominator <= max_den, by continued
// fractions (deterministic; same semantics as Python's limit_denominator).
Rational rationalize(double x, const Integer& max_den);

// Nearest p / 2^k where 2^k is the largest power of two <= cap, ties toward
// +infinity. Keeps builder coefficients on one dyadic lattice so the C3
// integration constants stay small across thousands of pieces.
Rational rationalize_dyadic(double x, const Integer& cap);

// ASCII form "p/q", q omitted when 1. This token is bit-exact in all formats.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

double to_double(const Rational& q);

Rational pow_int(const Rational& q, unsigned k);

// k! for k <= 15, precomputed.
const Integer& factorial(unsigned k);

}  // namespace bilap
