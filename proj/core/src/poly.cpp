#include "bilap/poly.hpp"

#include <stdexcept>

namespace bilap {

Rational poly_eval(const Poly& p, const Rational& s) {
    if (p.c.empty()) return 0;
    Rational t = s - p.base;
    Rational acc = p.c.back();
    for (int i = static_cast<int>(p.c.size()) - 2; i >= 0; --i) acc = acc * t + p.c[i];
    return acc;
}

Poly poly_derivative(const Poly& p) {
    Poly d;
    d.base = p.base;
    if (p.c.size() <= 1) return d;
    d.c.resize(p.c.size() - 1);
    for (size_t i = 1; i < p.c.size(); ++i) d.c[i - 1] = p.c[i] * static_cast<long>(i);
    return d;
}

Poly poly_antiderivative(const Poly& p, const Rational& c0) {
    Poly a;
    a.base = p.base;
    a.c.resize(p.c.size() + 1);
    a.c[0] = c0;
    for (size_t i = 0; i < p.c.size(); ++i) a.c[i + 1] = p.c[i] / Rational(static_cast<long>(i + 1));
    return a;
}

Rational poly_sup_bound(const Poly& p, const Rational& h, int ell) {
    if (ell < 0 || ell > 7) throw std::invalid_argument("poly_sup_bound: ell out of range");
    if (h <= 0) throw std::invalid_argument("poly_sup_bound: h must be positive");
    Rational sum = 0;
    Rational hp = 1;
    for (size_t i = ell; i < p.c.size(); ++i) {
        Integer falling = 1;
        for (int k = 0; k < ell; ++k) falling *= static_cast<long>(i - k);
        sum += Rational(falling) * abs(p.c[i]) * hp;
        hp *= h;
    }
    return sum;
}

Rational coeffs_deriv_at(const Coeffs& a, int ell, const Rational& t) {
    // Horner on the ell-th derivative's coefficients i!/(i-ell)! a_i
    Rational acc = 0;
    for (int i = 7; i >= ell; --i) {
        Integer falling = 1;
        for (int k = 0; k < ell; ++k) falling *= (i - k);
        acc = acc * t + Rational(falling) * a[i];
    }
    return acc;
}

Rational coeffs_sup_bound(const Coeffs& a, const Rational& h, int ell) {
    Rational sum = 0;
    Rational hp = 1;
    for (int i = ell; i <= 7; ++i) {
        Integer falling = 1;
        for (int k = 0; k < ell; ++k) falling *= (i - k);
        sum += Rational(falling) * abs(a[i]) * hp;
        hp *= h;
    }
    return sum;
}

}  // namespace bilap
