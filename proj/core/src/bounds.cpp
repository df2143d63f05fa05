#include "bilap/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "bilap/exp_enclosure.hpp"
#include "bilap/operator_l.hpp"

namespace bilap {

const char* to_string(GateResult g) {
    switch (g) {
        case GateResult::holds: return "holds";
        case GateResult::fails: return "fails";
        case GateResult::indeterminate: return "indeterminate";
    }
    return "unknown";
}

namespace {

// N^2 (N-4)^2 / 16, canonicalized (mpq_class(num, den) does not reduce).
Rational rellich_constant(int N) {
    Rational r(Integer(1L * N * N) * Integer(1L * (N - 4) * (N - 4)), 16);
    r.canonicalize();
    return r;
}

}  // namespace

GateResult gate_smooth_dim(int N) {
    const Rational lhs(k_constant(N));
    const Rational rhs = rellich_constant(N);
    return lhs <= rhs ? GateResult::holds : GateResult::fails;
}

GateResult gate_explicit_subsolution(int N) {
    const ExpEnclosure e1 = exp_enclosure(Rational(1));
    const Rational e2_lower = e1.lower * e1.lower;  // e > 0, so squaring keeps order
    const Rational e2_upper = e1.upper * e1.upper;
    const Rational K(k_constant(N));
    const Rational rhs = rellich_constant(N);
    if (K * e2_upper <= rhs) return GateResult::holds;
    if (K * e2_lower > rhs) return GateResult::fails;
    return GateResult::indeterminate;
}

Rational beta0(const Rational& lambda, const Rational& eps0, const Rational& eps) {
    if (!(eps0 > 0 && eps0 < lambda))
        throw std::domain_error("beta0: need 0 < eps0 < lambda");
    const Rational nine_eps = 9 * eps;
    if (!(nine_eps >= 0 && nine_eps <= Rational(3, 2)))
        throw std::domain_error("beta0: need 0 <= 9*eps <= 3/2");
    const Rational up = pow_int(lambda + eps0, 3) / pow_int(lambda - eps0, 2);
    return up * exp_enclosure(nine_eps).upper;
}

Enclosure lambda_star_enclosure(const VerifyReport& report, const DimensionParams& p) {
    Enclosure out;
    for (const CheckResult& c : report.checks) {
        if (!c.ok()) {
            out.reason = "check " + c.name + " " + to_string(c.status);
            return out;
        }
    }
    if (report.checks.size() != 9) {
        out.reason = "incomplete check chain";
        return out;
    }
    const Rational b0 = beta0(p.lambda, p.eps0, p.eps);
    if (!(b0 <= p.beta)) {
        out.reason = "beta window empty: beta0 > beta";
        return out;
    }
    if (!(p.beta <= p.beta_bar)) {
        out.reason = "beta window empty: beta > beta_bar";
        return out;
    }
    const Rational two_eps = 2 * p.eps;
    if (!(two_eps <= Rational(3, 2))) {
        out.reason = "eps outside enclosure domain";
        return out;
    }
    out.lower = (p.lambda - p.eps0) * exp_enclosure(-two_eps).lower;
    out.upper = (p.lambda + p.eps0) * exp_enclosure(two_eps).upper;
    out.certified = true;
    return out;
}

double reconstruct_u(const PiecewisePoly& w, double r) {
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("reconstruct_u: need 0 < r <= 1");
    const double s = std::log(r);
    const double x0 = to_double(w.grid.x0);
    const double h = to_double(w.grid.h);
    double ws;
    if (s <= x0) {
        ws = to_double(w.tail_value);
    } else {
        long j = static_cast<long>(std::floor((s - x0) / h));
        if (j < 0) j = 0;
        if (j >= w.grid.n) j = w.grid.n - 1;
        const double t = s - (x0 + h * static_cast<double>(j));
        const Coeffs& a = w.pieces[j];
        double acc = 0.0;
        for (int i = 7; i >= 0; --i) acc = acc * t + to_double(a[i]);
        ws = acc;
    }
    return ws - 4.0 * s;
}

}  // namespace bilap
