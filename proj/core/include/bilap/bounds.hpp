#pragma once

#include <string>

#include "bilap/params.hpp"
#include "bilap/piecewise.hpp"
#include "bilap/rational.hpp"
#include "bilap/verifier.hpp"

namespace bilap {

enum class GateResult { holds, fails, indeterminate };
const char* to_string(GateResult g);

// Exact integer comparison 8(N-2)(N-4) <= N^2 (N-4)^2 / 16: the dimension
// window in which the certified machinery applies (first holds at N = 13).
GateResult gate_smooth_dim(int N);

// 8(N-2)(N-4) e^2 <= N^2 (N-4)^2 / 16 with a certified two-sided enclosure
// of e^2 (the square of the degree-14 enclosure at 1).  Where this holds
// (N >= 32) an explicit subsolution settles the question without certified
// profiles; in the window 13..31 it fails, which is why they are needed.
GateResult gate_explicit_subsolution(int N);

// beta0 = (lambda+eps0)^3 / (lambda-eps0)^2 * upper(e^{9 eps}).
// Requires 0 < eps0 < lambda and 0 <= 9 eps <= 3/2.
Rational beta0(const Rational& lambda, const Rational& eps0, const Rational& eps);

struct Enclosure {
    bool certified = false;
    Rational lower;
    Rational upper;
    std::string reason;  // non-empty when refused
};

// Certified two-sided bounds of the extremal parameter:
//   [(lambda-eps0) lower(e^{-2 eps}), (lambda+eps0) upper(e^{2 eps})]
// Refuses (certified = false, reason set) unless every check in the report
// passed and beta0 <= beta <= beta_bar.
Enclosure lambda_star_enclosure(const VerifyReport& report, const DimensionParams& p);

// Floating reconstruction of the radial solution u(r) = w(log r) - 4 log r
// on (0, 1], constant tail branch below e^{x0}.  Diagnostic output only.
double reconstruct_u(const PiecewisePoly& w, double r);

}  // namespace bilap
