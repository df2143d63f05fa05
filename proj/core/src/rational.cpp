#include "bilap/rational.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace bilap {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite input");
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

Rational rationalize(double x, const Integer& max_den) {
    if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite input");
    if (max_den < 1) throw std::invalid_argument("rationalize: max_den < 1");
    Rational v = rational_from_double(x);
    if (v.get_den() <= max_den) return v;

    // Continued-fraction convergents p1/q1 until the denominator cap, then the
    // best semiconvergent; pick whichever is closer, convergent on ties.
    Integer n = v.get_num(), d = v.get_den();
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (;;) {
        Integer a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        Integer q2 = q0 + a * q1;
        if (q2 > max_den) break;
        Integer p2 = p0 + a * p1;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        n = d; d = r;
        if (d == 0) break;  // exact (cannot happen here: den > max_den >= 1)
    }
    Integer k = (max_den - q0) / q1;
    Rational conv(p1, q1);
    conv.canonicalize();
    Rational semi(p0 + k * p1, q0 + k * q1);
    semi.canonicalize();
    Rational ec = abs(conv - v), es = abs(semi - v);
    return (ec <= es) ? conv : semi;
}

Rational rationalize_dyadic(double x, const Integer& cap) {
    if (!std::isfinite(x)) throw std::invalid_argument("rationalize_dyadic: non-finite input");
    if (cap < 1) throw std::invalid_argument("rationalize_dyadic: cap < 1");
    size_t k = mpz_sizeinbase(cap.get_mpz_t(), 2) - 1;  // largest 2^k <= cap
    Rational v = rational_from_double(x);
    Integer scaled_num = v.get_num() << k;
    // nearest integer to scaled_num / den, ties toward +infinity
    Integer two_den = v.get_den() * 2;
    Integer rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), Integer(2 * scaled_num + v.get_den()).get_mpz_t(),
               two_den.get_mpz_t());
    Rational out(rounded, Integer(1) << k);
    out.canonicalize();
    return out;
}

std::string to_string(const Rational& q) {
    return q.get_str();  // gmp prints "p/q", "p" when q == 1
}

Rational parse_rational(const std::string& s) {
    // strict grammar: -?digits(/digits)?, no whitespace, no empty parts
    if (s.empty()) throw std::invalid_argument("parse_rational: empty token");
    size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("parse_rational: bare sign");
    bool seen_slash = false, digit_before = false, digit_after = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '/') {
            if (seen_slash || !digit_before) throw std::invalid_argument("parse_rational: bad '/'");
            seen_slash = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            (seen_slash ? digit_after : digit_before) = true;
        } else {
            throw std::invalid_argument("parse_rational: bad character in \"" + s + "\"");
        }
    }
    if (!digit_before || (seen_slash && !digit_after))
        throw std::invalid_argument("parse_rational: incomplete token \"" + s + "\"");
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("parse_rational: unparsable token \"" + s + "\"");
    if (q.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator");
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

Rational pow_int(const Rational& q, unsigned k) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num().get_mpz_t(), k);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den().get_mpz_t(), k);
    return r;  // gcd(p,q)=1 implies gcd(p^k,q^k)=1, no canonicalize needed
}

const Integer& factorial(unsigned k) {
    static const std::array<Integer, 16> table = [] {
        std::array<Integer, 16> t;
        t[0] = 1;
        for (unsigned i = 1; i < 16; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    if (k >= table.size()) throw std::out_of_range("factorial: k > 15");
    return table[k];
}

}  // namespace bilap
