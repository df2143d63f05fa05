#pragma once

#include <array>
#include <vector>

#include "bilap/rational.hpp"

namespace bilap {

// Polynomial in (s - base), degree <= 7 throughout the certified profiles.
struct Poly {
    std::vector<Rational> c;  // c[i] multiplies (s - base)^i
    Rational base = 0;

    int degree() const { return static_cast<int>(c.size()) - 1; }
};

Rational poly_eval(const Poly& p, const Rational& s);
Poly poly_derivative(const Poly& p);
Poly poly_antiderivative(const Poly& p, const Rational& c0);

// sum_{i>=ell} i(i-1)...(i-ell+1) |c_i| h^(i-ell): certified bound for the
// ell-th derivative's magnitude on [base, base+h].
Rational poly_sup_bound(const Poly& p, const Rational& h, int ell);

// Piece-local helpers on fixed-size coefficient arrays (offset t from the
// piece's left knot). These are the verifier's hot path.
using Coeffs = std::array<Rational, 8>;

Rational coeffs_deriv_at(const Coeffs& a, int ell, const Rational& t);
Rational coeffs_sup_bound(const Coeffs& a, const Rational& h, int ell);

}  // namespace bilap
