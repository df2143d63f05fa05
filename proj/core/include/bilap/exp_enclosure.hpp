#pragma once

#include "bilap/rational.hpp"

namespace bilap {

// Certified rational bounds of e^x on |x| <= 3/2, built from the degree-14
// Taylor polynomial T of exp at 0.
//   x <  0: tail alternates with decreasing magnitude, so e^x in [T + x^15/15!, T]
//   x >  0: tail is positive and below the geometric bound x^15/15! * 16/(16-x)
//   x == 0: exact
// Both cases give upper - lower <= 2*(3/2)^15/15!.
struct ExpEnclosure {
    Rational argument;
    Rational lower;
    Rational upper;
};

// T(x) = sum_{k<=14} x^k / k!, exact.
Rational taylor_exp(const Rational& x);

// T'(x) = sum_{k<=13} x^k / k!, exact (the derivative of taylor_exp).
Rational taylor_exp_deriv(const Rational& x);

// Throws std::domain_error when |x| > 3/2.
ExpEnclosure exp_enclosure(const Rational& x);

// (3/2)^15 / 15!: the uniform remainder magnitude on the enclosure domain.
const Rational& exp_remainder_bound();

// (3/2)^14 / 14!: pointwise bound of |e^x - T'(x)| on [-3/2, 1].
const Rational& exp_deriv_remainder_bound();

}  // namespace bilap
