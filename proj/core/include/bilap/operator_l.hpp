#pragma once

#include <vector>

#include "bilap/rational.hpp"

namespace bilap {

// L w = w'''' + 2(N-4) w''' + (N^2-10N+20) w'' - 2(N-2)(N-4) w'
struct OperatorL {
    int N = 0;
    long c3 = 0, c2 = 0, c1 = 0;

    static OperatorL make(int N) {
        OperatorL op;
        op.N = N;
        op.c3 = 2L * (N - 4);
        op.c2 = 1L * N * N - 10L * N + 20;
        op.c1 = -2L * (N - 2) * (N - 4);
        return op;
    }
};

inline long k_constant(int N) { return 8L * (N - 2) * (N - 4); }

// L conjugated by e^{-alpha s}:
// T_alpha psi = psi'''' + t3 psi''' + t2 psi'' + t1 psi' + t0 psi
struct TAlpha {
    int N = 0;
    Rational t3, t2, t1, t0;

    static TAlpha make(int N, const Rational& alpha);
};

// indicial quartic P_N(a) = a^4 - 2(N-4)a^3 + (N^2-10N+20)a^2 + 2(N-2)(N-4)a
Rational indicial_eval(int N, const Rational& alpha);
double indicial_eval_d(int N, double alpha);

// All real roots of P_N(a) - rhs, ascending, isolated to 1e-12.
std::vector<double> indicial_roots(int N, double rhs);

// Unique root of P_N(a) = rhs in (0, (N-4)/2); throws if not bracketed.
double find_alpha_bar(int N, double rhs);

}  // namespace bilap
