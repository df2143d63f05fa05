#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bilap/params.hpp"
#include "bilap/piecewise.hpp"
#include "bilap/rational.hpp"

namespace bilap {

// Exact-arithmetic verification of the certificate inequalities.  Every
// margin below is an exact rational computed without any floating point; a
// check passes only when the stated inequality holds for the margin.  Taylor
// remainders of exp are absorbed through certified constants, so each passing
// check is a proof of the corresponding continuum inequality on [x0, 0]
// (pieces are covered by subintervals of width delta = h/m with first-order
// envelopes and second-derivative sup bounds).

enum class CheckStatus { passed, failed, skipped };
const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    // Sign convention: majorant-style checks (subsolution, supersolution's
    // mirror via minorant, boundary, tail, psi_slope) pass iff margin <= 0;
    // minorant-style checks (range, psi_positive, alpha, stability) pass iff
    // margin >= 0.  worst_location is the grid coordinate that attains it.
    Rational worst_margin;
    Rational worst_location;
    bool ok() const { return status == CheckStatus::passed; }
};

struct VerifyOptions {
    long m = 0;         // subintervals per piece; 0 -> DimensionParams::m
    int jobs = 1;       // worker threads (result is independent of this)
    long piece_lo = 0;  // first piece to cover (inclusive)
    long piece_hi = -1; // last piece to cover (inclusive); -1 -> n-1
};

// 1. range:        -3/2 <= w <= 1 on [x0, 0] and for the tail value
// 2. boundary:     max(|w(0)|, |w'(0) - 4|) <= eps
// 3. tail:         K in [(lambda-eps0) e^tail, (lambda+eps0) e^tail]
// 4. subsolution:  L w + K - (lambda+eps0) e^w <= 0 on [x0, 0]
// 5. supersolution:L w + K - (lambda-eps0) e^w >= 0 on [x0, 0]
// 6. psi_positive: psi >= 0 (direct minorant up to the first failing
//                  subinterval; the remainder is delegated to psi_slope)
// 7. psi_slope:    psi' <= 0 on the remaining suffix and psi(0) = 0 exactly,
//                  which closes psi >= 0 by monotonicity
// 8. alpha:        0 < alpha < (N-4)/2 and P_N(alpha) >= beta e^tail
// 9. stability:    T_alpha psi - beta e^w psi >= 0 on [x0, 0]
CheckResult check_range(const PiecewisePoly& w, const DimensionParams& p,
                        const VerifyOptions& opt = {});
CheckResult check_boundary(const PiecewisePoly& w, const DimensionParams& p);
CheckResult check_tail(const PiecewisePoly& w, const DimensionParams& p);
CheckResult check_subsolution(const PiecewisePoly& w, const DimensionParams& p,
                              const VerifyOptions& opt = {});
CheckResult check_supersolution(const PiecewisePoly& w, const DimensionParams& p,
                                const VerifyOptions& opt = {});
std::pair<CheckResult, CheckResult> check_psi_positivity(const PiecewisePoly& psi,
                                                         const DimensionParams& p,
                                                         const VerifyOptions& opt = {});
CheckResult check_alpha(const PiecewisePoly& w, const DimensionParams& p);
CheckResult check_stability(const PiecewisePoly& w, const PiecewisePoly& psi,
                            const DimensionParams& p, const VerifyOptions& opt = {});

struct VerifyReport {
    std::vector<CheckResult> checks;  // always 9, in the order above
    bool all_passed = false;
    const CheckResult& by_name(const std::string& name) const;
};

// Runs the chain in order; a failure marks all later checks skipped.
VerifyReport verify_all(const PiecewisePoly& w, const PiecewisePoly& psi,
                        const DimensionParams& p, const VerifyOptions& opt = {});

}  // namespace bilap
