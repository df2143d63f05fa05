#include "bilap/operator_l.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilap {

TAlpha TAlpha::make(int N, const Rational& alpha) {
    OperatorL L = OperatorL::make(N);
    TAlpha t;
    t.N = N;
    const Rational a = alpha;
    t.t3 = Rational(-4) * a + Rational(L.c3);
    t.t2 = Rational(6) * a * a - Rational(3) * Rational(L.c3) * a + Rational(L.c2);
    t.t1 = Rational(-4) * a * a * a + Rational(3) * Rational(L.c3) * a * a -
           Rational(2) * Rational(L.c2) * a + Rational(L.c1);
    t.t0 = indicial_eval(N, alpha);
    return t;
}

Rational indicial_eval(int N, const Rational& alpha) {
    OperatorL L = OperatorL::make(N);
    const Rational a = alpha;
    // a^4 - 2(N-4) a^3 + (N^2-10N+20) a^2 + 2(N-2)(N-4) a, Horner form
    return (((a - Rational(L.c3)) * a + Rational(L.c2)) * a - Rational(L.c1)) * a;
}

double indicial_eval_d(int N, double alpha) {
    OperatorL L = OperatorL::make(N);
    return (((alpha - L.c3) * alpha + L.c2) * alpha - L.c1) * alpha;
}

namespace {

// bisection for a sign change of f on [lo, hi], f(lo) and f(hi) of opposite sign
template <class F>
double bisect(F f, double lo, double hi, double flo) {
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1 + std::abs(lo) + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0) return mid;
        if ((flo < 0) != (fm < 0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> indicial_roots(int N, double rhs) {
    OperatorL L = OperatorL::make(N);
    auto q = [&](double a) { return indicial_eval_d(N, a) - rhs; };
    // critical points of the quartic: roots of q' (cubic), found from the
    // roots of q'' (quadratic) and bisection on the monotone intervals
    auto dq = [&](double a) { return ((4 * a - 3.0 * L.c3) * a + 2.0 * L.c2) * a - L.c1; };
    // q'' = 12a^2 - 6 c3 a + 2 c2
    double disc = 36.0 * L.c3 * L.c3 - 96.0 * L.c2;
    double bound = 2.0 + (std::abs(2.0 * L.c3) + std::abs(1.0 * L.c2) + std::abs(1.0 * L.c1) +
                          std::abs(rhs));  // Cauchy-style outer bound, generous
    std::vector<double> crit_edges{-bound};
    if (disc > 0) {
        double r = std::sqrt(disc);
        crit_edges.push_back((6.0 * L.c3 - r) / 24.0);
        crit_edges.push_back((6.0 * L.c3 + r) / 24.0);
    }
    crit_edges.push_back(bound);
    std::vector<double> crit;  // roots of dq
    for (size_t i = 0; i + 1 < crit_edges.size(); ++i) {
        double a = crit_edges[i], b = crit_edges[i + 1];
        double fa = dq(a), fb = dq(b);
        if ((fa < 0) != (fb < 0)) crit.push_back(bisect(dq, a, b, fa));
    }
    std::vector<double> edges{-bound};
    edges.insert(edges.end(), crit.begin(), crit.end());
    edges.push_back(bound);
    std::vector<double> roots;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        double fa = q(a), fb = q(b);
        if (fa == 0) roots.push_back(a);
        if ((fa < 0) != (fb < 0)) roots.push_back(bisect(q, a, b, fa));
        if (i + 2 == edges.size() && fb == 0) roots.push_back(b);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                roots.end());
    return roots;
}

double find_alpha_bar(int N, double rhs) {
    double hi = 0.5 * (N - 4);
    double flo = indicial_eval_d(N, 0.0) - rhs;  // = -rhs
    double fhi = indicial_eval_d(N, hi) - rhs;
    if (!(flo < 0 && fhi > 0))
        throw std::runtime_error("find_alpha_bar: P_N - rhs not bracketed on (0, (N-4)/2)");
    auto q = [&](double a) { return indicial_eval_d(N, a) - rhs; };
    return bisect(q, 0.0, hi, flo);
}

}  // namespace bilap
