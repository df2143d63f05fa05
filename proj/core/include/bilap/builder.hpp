#pragma once

#include <array>
#include <vector>

#include "bilap/piecewise.hpp"
#include "bilap/rational.hpp"
#include "bilap/samples.hpp"

namespace bilap {

// Turns untrusted floating samples of a fourth derivative into exact, globally
// C3 piecewise polynomials of degree <= 7.  Soundness never depends on the
// samples being accurate: every downstream claim is re-established on the
// exact object by the inequality verifier.

struct BuildOptions {
    // Rationalized spline coefficients are snapped to the dyadic lattice
    // p / 2^k with 2^k the largest power of two <= cap.  A fixed lattice keeps
    // the integration constants' denominators bounded across all pieces.
    Integer cap = Integer(1) << 40;
    // Exact affine correction of the fourth derivative making w(0) = 0 and
    // w'(0) = 4 hold as rational identities (w profiles only).
    bool terminal_correction = true;
};

// Profile for the log-radial solution w: spline the samples, rationalize,
// integrate four times from x0 with seeds (tail, 0, 0, 0) where
// tail = dyadic(log(K/lambda)), then apply the terminal correction
//   q(s) = mu0 (s-x0)^4/24 + mu1 (s-x0)^5/120
// which vanishes through third order at x0 and pins both end conditions.
ProfileFile build_w(const ProfileSamples& s, const Rational& lambda,
                    const BuildOptions& opt = {});

// Profile for the auxiliary function psi: same integration with zero seeds,
// then a constant shift making psi(0) = 0 exact; the tail value becomes the
// shifted left endpoint value.
ProfileFile build_psi(const ProfileSamples& s, const Rational& lambda,
                      const BuildOptions& opt = {});

// Exact 4-fold integration of per-piece cubic fourth derivatives d4 (one
// quadruple of coefficients in the local offset per interval).  seeds are the
// local Taylor coefficients of orders 0..3 of piece 0 at x0.  Exposed for
// property tests; build_w / build_psi are thin wrappers over this.
PiecewisePoly integrate_fourth_derivative(const Grid& grid,
                                          const std::vector<std::array<Rational, 4>>& d4,
                                          const std::array<Rational, 4>& seeds,
                                          const Rational& tail_value);

}  // namespace bilap
