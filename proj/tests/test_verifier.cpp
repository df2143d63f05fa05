// Exact-arithmetic inequality verification: chain behavior, worker
// invariance, independent margin recomputation, and pointwise soundness of
// the certified envelopes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

#include "bilap/exp_enclosure.hpp"
#include "bilap/operator_l.hpp"
#include "bilap/poly.hpp"
#include "bilap/verifier.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bilap;
using testsupport::pipeline13;
using testsupport::rat_abs;
using testsupport::rng;
using testsupport::run_pipeline;

namespace {

const std::array<const char*, 9> kChainOrder = {
    "range",      "boundary",     "tail",  "subsolution", "supersolution",
    "psi_positive", "psi_slope", "alpha", "stability"};

// Independent recomputation of the sub/supersolution margin over a piece
// range, through the Poly API instead of the verifier's Coeffs hot path.
struct Extremum {
    bool set = false;
    Rational margin, location;
};

Extremum recompute_profile_margin(const PiecewisePoly& w, const DimensionParams& p,
                                  long lo, long hi, long m, bool super) {
    const OperatorL op = OperatorL::make(p.N);
    const Rational K(k_constant(p.N));
    const Rational lam = super ? Rational(p.lambda - p.eps0) : Rational(p.lambda + p.eps0);
    const Rational delta = w.grid.h / m;
    Extremum acc;
    for (long j = lo; j <= hi; ++j) {
        Poly poly;
        poly.c.assign(w.pieces[static_cast<size_t>(j)].begin(),
                      w.pieces[static_cast<size_t>(j)].end());
        poly.base = 0;
        std::array<Poly, 6> der;  // der[l] = l-th derivative as a Poly
        der[0] = poly;
        for (int l = 1; l <= 5; ++l) der[static_cast<size_t>(l)] = poly_derivative(der[static_cast<size_t>(l - 1)]);

        Rational B[7];
        for (int l = 1; l <= 6; ++l) B[l] = poly_sup_bound(poly, w.grid.h, l);
        const Rational M = Rational(B[6] + rat_abs(Rational(op.c3)) * B[5] +
                                    rat_abs(Rational(op.c2)) * B[4] +
                                    rat_abs(Rational(op.c1)) * B[3] +
                                    3 * lam * (B[1] * B[1] + B[2]));
        const Rational env_const = Rational(M * delta * delta / 2 + lam * exp_remainder_bound() +
                                            lam * exp_deriv_remainder_bound() * B[1] * delta);
        for (long i = 0; i < m; ++i) {
            const Rational t = Rational(delta * Rational(i));
            Rational d[6];
            for (int l = 0; l <= 5; ++l) d[l] = poly_eval(der[static_cast<size_t>(l)], t);
            const Rational ftil = Rational(d[4] + op.c3 * d[3] + op.c2 * d[2] + op.c1 * d[1] +
                                           K - lam * taylor_exp(d[0]));
            const Rational ftp = Rational(d[5] + op.c3 * d[4] + op.c2 * d[3] + op.c1 * d[2] -
                                          lam * taylor_exp_deriv(d[0]) * d[1]);
            const Rational env = Rational(rat_abs(ftp) * delta + env_const);
            const Rational cand = super ? Rational(ftil - env) : Rational(ftil + env);
            const Rational loc = Rational(w.grid.knot(j) + t);
            const bool better = super ? cand < acc.margin : cand > acc.margin;
            if (!acc.set || better) {
                acc.set = true;
                acc.margin = cand;
                acc.location = loc;
            }
        }
    }
    return acc;
}

PiecewisePoly square_profile() {
    // psi(s) = s^2 on [-1, 0] with 8 pieces: nonnegative, psi(0) = 0 exactly,
    // decreasing onto 0 -- a minimal profile whose last pieces defeat the
    // direct minorant and must be closed by the slope rescue.
    PiecewisePoly q;
    q.grid = Grid::make(Rational(-1), 8);
    q.pieces.resize(8);
    for (long j = 0; j < 8; ++j) {
        Coeffs a{};
        const Rational y = q.grid.knot(j);
        a[0] = Rational(y * y);
        a[1] = Rational(2 * y);
        a[2] = 1;
        q.pieces[static_cast<size_t>(j)] = a;
    }
    q.tail_value = 1;
    return q;
}

}  // namespace

TEST_CASE("the full chain passes for N = 13 and reports exact margins") {
    const auto& pl = pipeline13();
    const VerifyReport rep = verify_all(pl.w.poly, pl.psi.poly, pl.params, {});

    REQUIRE(rep.checks.size() == 9);
    for (size_t i = 0; i < 9; ++i) {
        CHECK(rep.checks[i].name == kChainOrder[i]);
        CHECK(rep.checks[i].ok());
    }
    CHECK(rep.all_passed);

    // the terminal correction makes both boundary values exact, so the
    // boundary margin is exactly -eps
    CHECK(rep.by_name("boundary").worst_margin == Rational(-pl.params.eps));
    CHECK(rep.by_name("boundary").worst_location == 0);

    // the slope rescue is genuinely engaged near s = 0 (a transversal zero
    // always defeats the direct minorant on the last subinterval)
    CHECK(rep.by_name("psi_slope").worst_margin < 0);

    CHECK_THROWS_AS(rep.by_name("no_such_check"), std::out_of_range);
}

TEST_CASE("worker count cannot change any reported result") {
    const auto& pl = pipeline13();
    VerifyOptions serial;
    serial.jobs = 1;
    VerifyOptions wide;
    wide.jobs = 16;
    const VerifyReport a = verify_all(pl.w.poly, pl.psi.poly, pl.params, serial);
    const VerifyReport b = verify_all(pl.w.poly, pl.psi.poly, pl.params, wide);
    REQUIRE(a.checks.size() == b.checks.size());
    for (size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].status == b.checks[i].status);
        CHECK(a.checks[i].worst_margin == b.checks[i].worst_margin);
        CHECK(a.checks[i].worst_location == b.checks[i].worst_location);
    }
}

TEST_CASE("reported margins equal an independent recomputation") {
    const auto& pl = pipeline13();
    VerifyOptions opt;
    opt.piece_lo = 0;
    opt.piece_hi = 120;
    opt.m = 3;

    const CheckResult sub = check_subsolution(pl.w.poly, pl.params, opt);
    const Extremum sub_ref = recompute_profile_margin(pl.w.poly, pl.params, 0, 120, 3, false);
    CHECK(sub.worst_margin == sub_ref.margin);
    CHECK(sub.worst_location == sub_ref.location);

    const CheckResult sup = check_supersolution(pl.w.poly, pl.params, opt);
    const Extremum sup_ref = recompute_profile_margin(pl.w.poly, pl.params, 0, 120, 3, true);
    CHECK(sup.worst_margin == sup_ref.margin);
    CHECK(sup.worst_location == sup_ref.location);
}

TEST_CASE("a piece-range split reproduces the full margin") {
    const auto& pl = pipeline13();
    const long n = pl.w.poly.grid.n;
    VerifyOptions full, lo, hi;
    full.m = lo.m = hi.m = 1;
    lo.piece_lo = 0;
    lo.piece_hi = n / 2 - 1;
    hi.piece_lo = n / 2;
    hi.piece_hi = n - 1;

    const CheckResult f = check_subsolution(pl.w.poly, pl.params, full);
    const CheckResult a = check_subsolution(pl.w.poly, pl.params, lo);
    const CheckResult b = check_subsolution(pl.w.poly, pl.params, hi);
    CHECK(f.worst_margin == std::max(a.worst_margin, b.worst_margin));
    CHECK(f.worst_location ==
          (a.worst_margin >= b.worst_margin ? a.worst_location : b.worst_location));

    const CheckResult fs = check_supersolution(pl.w.poly, pl.params, full);
    const CheckResult as = check_supersolution(pl.w.poly, pl.params, lo);
    const CheckResult bs = check_supersolution(pl.w.poly, pl.params, hi);
    CHECK(fs.worst_margin == std::min(as.worst_margin, bs.worst_margin));
    CHECK(fs.worst_location ==
          (as.worst_margin <= bs.worst_margin ? as.worst_location : bs.worst_location));
}

TEST_CASE("certified envelopes dominate the true residuals pointwise") {
    // The proof obligation behind the margins: for every x in the covered
    // domain, L w + K - (lambda+eps0) e^w <= subsolution margin (via the
    // enclosure's lower bound), and symmetrically for the supersolution and
    // stability margins.  Sampled at random exact rationals.
    const auto& pl = pipeline13();
    const DimensionParams& p = pl.params;
    const VerifyReport rep = verify_all(pl.w.poly, pl.psi.poly, p, {});
    REQUIRE(rep.all_passed);
    const Rational mar_sub = rep.by_name("subsolution").worst_margin;
    const Rational mar_sup = rep.by_name("supersolution").worst_margin;
    const Rational mar_stab = rep.by_name("stability").worst_margin;

    const OperatorL op = OperatorL::make(p.N);
    const TAlpha ta = TAlpha::make(p.N, p.alpha);
    const Rational K(k_constant(p.N));

    auto g = rng(71);
    std::uniform_int_distribution<long> piece(0, pl.w.poly.grid.n - 1);
    std::uniform_int_distribution<long> off(0, (1 << 20) - 1);
    for (int it = 0; it < 1000; ++it) {
        const long j = piece(g);
        const Rational t = Rational(pl.w.poly.grid.h * Rational(off(g)) / Rational(1 << 20));
        const Rational x = Rational(pl.w.poly.grid.knot(j) + t);

        Rational d[5], z[5];
        for (int l = 0; l <= 4; ++l) d[l] = pl.w.poly.eval(x, l);
        for (int l = 0; l <= 4; ++l) z[l] = pl.psi.poly.eval(x, l);
        const ExpEnclosure e = exp_enclosure(d[0]);
        const Rational Lw =
            Rational(d[4] + op.c3 * d[3] + op.c2 * d[2] + op.c1 * d[1]);

        const Rational f_up = Rational(Lw + K - (p.lambda + p.eps0) * e.lower);
        const Rational f_low = Rational(Lw + K - (p.lambda - p.eps0) * e.upper);
        CHECK(f_up <= mar_sub);
        CHECK(f_low >= mar_sup);

        const Rational t_psi = Rational(z[4] + ta.t3 * z[3] + ta.t2 * z[2] + ta.t1 * z[1] +
                                        ta.t0 * z[0]);
        CHECK(z[0] >= 0);  // psi really is nonnegative where sampled
        const Rational g_low = Rational(t_psi - p.beta * e.upper * z[0]);
        CHECK(g_low >= mar_stab);
    }
}

TEST_CASE("the measured subdivision is load-bearing for N = 17") {
    const auto pl = run_pipeline(17);
    CHECK(pl.params.m == 2);

    VerifyOptions one, two;
    one.m = 1;
    two.m = 2;
    const CheckResult sub1 = check_subsolution(pl.w.poly, pl.params, one);
    const CheckResult sub2 = check_subsolution(pl.w.poly, pl.params, two);
    CHECK(!sub1.ok());
    CHECK(sub1.worst_margin > 0);  // m = 1 envelope slack is genuinely too coarse
    CHECK(sub2.ok());
    CHECK(sub2.worst_margin <= 0);
    CHECK(sub2.worst_margin < sub1.worst_margin);

    const VerifyReport rep = verify_all(pl.w.poly, pl.psi.poly, pl.params, {});
    CHECK(rep.all_passed);
}

TEST_CASE("options: explicit m equals the table default, bad ranges throw") {
    const auto& pl = pipeline13();
    DimensionParams doubled = pl.params;
    doubled.m = 2;
    VerifyOptions two;
    two.m = 2;
    const CheckResult a = check_range(pl.w.poly, doubled, {});
    const CheckResult b = check_range(pl.w.poly, pl.params, two);
    CHECK(a.worst_margin == b.worst_margin);
    CHECK(a.worst_location == b.worst_location);

    VerifyOptions bad;
    bad.piece_lo = -1;
    CHECK_THROWS_AS(check_range(pl.w.poly, pl.params, bad), std::invalid_argument);
    bad.piece_lo = 0;
    bad.piece_hi = pl.w.poly.grid.n;
    CHECK_THROWS_AS(check_range(pl.w.poly, pl.params, bad), std::invalid_argument);
    bad.piece_lo = 10;
    bad.piece_hi = 5;
    CHECK_THROWS_AS(check_range(pl.w.poly, pl.params, bad), std::invalid_argument);

    DimensionParams zero_m = pl.params;
    zero_m.m = 0;
    CHECK_THROWS_AS(check_range(pl.w.poly, zero_m, {}), std::invalid_argument);
}

TEST_CASE("a nonzero end value is caught even when positivity still holds") {
    const auto& pl = pipeline13();
    PiecewisePoly bad = pl.psi.poly;
    const Rational tiny(Integer(1), Integer(1) << 50);
    bad.pieces.back()[0] += tiny;

    const VerifyReport rep = verify_all(pl.w.poly, bad, pl.params, {});
    CHECK(!rep.all_passed);
    for (size_t i = 0; i < 6; ++i) CHECK(rep.checks[i].ok());  // through psi_positive
    const CheckResult& slope = rep.by_name("psi_slope");
    CHECK(slope.status == CheckStatus::failed);
    CHECK(slope.worst_margin == tiny);
    CHECK(slope.worst_location == 0);
    // everything after the failure is skipped with neutral fields
    CHECK(rep.by_name("alpha").status == CheckStatus::skipped);
    CHECK(rep.by_name("alpha").worst_margin == 0);
    CHECK(rep.by_name("alpha").worst_location == 0);
    CHECK(rep.by_name("stability").status == CheckStatus::skipped);
}

TEST_CASE("an out-of-range profile fails early and poisons the chain") {
    const auto& pl = pipeline13();
    PiecewisePoly bad = pl.w.poly;
    bad.pieces[100][0] = 10;  // w(knot 100) jumps far above the range ceiling

    const VerifyReport rep = verify_all(bad, pl.psi.poly, pl.params, {});
    CHECK(!rep.all_passed);
    const CheckResult& range = rep.by_name("range");
    CHECK(range.status == CheckStatus::failed);
    CHECK(range.worst_margin < 0);
    CHECK(range.worst_location == bad.grid.knot(100));
    for (size_t i = 1; i < 9; ++i) {
        CHECK(rep.checks[i].status == CheckStatus::skipped);
        CHECK(rep.checks[i].worst_margin == 0);
        CHECK(rep.checks[i].worst_location == 0);
    }
}

TEST_CASE("profile grids must agree with each other and the parameters") {
    const auto& pl = pipeline13();
    PiecewisePoly chopped = pl.psi.poly;
    chopped.grid = Grid::make(chopped.grid.x0, chopped.grid.n - 1);
    chopped.pieces.pop_back();

    CHECK_THROWS_AS(verify_all(pl.w.poly, chopped, pl.params, {}), std::invalid_argument);
    CHECK_THROWS_AS(check_stability(pl.w.poly, chopped, pl.params, {}), std::invalid_argument);

    DimensionParams other = pl.params;
    other.grid = Grid::make(other.grid.x0, other.grid.n - 1);
    CHECK_THROWS_AS(verify_all(pl.w.poly, pl.psi.poly, other, {}), std::invalid_argument);
}

TEST_CASE("slope rescue on a profile with a transversal-looking end") {
    const PiecewisePoly psi = square_profile();
    DimensionParams p;  // only p.m is consulted by the psi checks
    p.m = 1;

    // unrestricted: prefix minorant passes, suffix is closed by the slope
    const auto pair = check_psi_positivity(psi, p, {});
    const CheckResult& pos = pair.first;
    const CheckResult& slope = pair.second;
    CHECK(pos.status == CheckStatus::passed);
    CHECK(pos.worst_margin == Rational(1, 32));
    CHECK(pos.worst_location == Rational(-3, 8));
    CHECK(slope.status == CheckStatus::passed);
    CHECK(slope.worst_margin == 0);
    CHECK(slope.worst_location == Rational(-1, 8));

    // restricted short of s = 0: monotonicity cannot rescue, the full direct
    // scan is reported and fails
    VerifyOptions cut;
    cut.piece_hi = 6;
    const auto pair2 = check_psi_positivity(psi, p, cut);
    CHECK(pair2.first.status == CheckStatus::failed);
    CHECK(pair2.first.worst_margin == Rational(-1, 64));
    CHECK(pair2.first.worst_location == Rational(-1, 4));
}
