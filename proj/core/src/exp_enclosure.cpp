#include "bilap/exp_enclosure.hpp"

#include <stdexcept>

namespace bilap {

namespace {

// sum_{k=0}^{deg} x^k/k! as one mpz Horner pass over a common denominator:
// N = sum (deg!/k!) p^k q^(deg-k), T = N / (deg! q^deg). Avoids per-term gcds.
Rational taylor_sum(const Rational& x, int deg) {
    const Integer& p = x.get_num();
    const Integer& q = x.get_den();
    std::vector<Integer> qpow(deg + 1);
    qpow[0] = 1;
    for (int k = 1; k <= deg; ++k) qpow[k] = qpow[k - 1] * q;
    Integer coef = 1;  // deg!/k!, built downward from k = deg
    Integer num = 1;   // Horner accumulator, starts at coefficient of x^deg
    for (int k = deg - 1; k >= 0; --k) {
        coef *= (k + 1);
        num = num * p + coef * qpow[deg - k];
    }
    Rational t(num, coef * qpow[deg]);  // coef now holds deg!
    t.canonicalize();
    return t;
}

}  // namespace

Rational taylor_exp(const Rational& x) { return taylor_sum(x, 14); }

Rational taylor_exp_deriv(const Rational& x) { return taylor_sum(x, 13); }

const Rational& exp_remainder_bound() {
    static const Rational r = [] {
        Rational v(Integer(14348907), Integer(32768));  // (3/2)^15
        return Rational(v / Rational(factorial(15)));
    }();
    return r;
}

const Rational& exp_deriv_remainder_bound() {
    static const Rational r = [] {
        Rational v(Integer(4782969), Integer(16384));  // (3/2)^14
        return Rational(v / Rational(factorial(14)));
    }();
    return r;
}

ExpEnclosure exp_enclosure(const Rational& x) {
    static const Rational domain(3, 2);
    if (abs(x) > domain) throw std::domain_error("exp_enclosure: |x| > 3/2");
    ExpEnclosure e;
    e.argument = x;
    Rational t = taylor_exp(x);
    if (x == 0) {
        e.lower = 1;
        e.upper = 1;
    } else if (x < 0) {
        Rational mag = pow_int(abs(x), 15) / Rational(factorial(15));
        e.lower = t - mag;
        e.upper = t;
    } else {
        Rational tail = pow_int(x, 15) / Rational(factorial(15));
        tail *= Rational(16) / (Rational(16) - x);
        e.lower = t;
        e.upper = t + tail;
    }
    return e;
}

}  // namespace bilap
