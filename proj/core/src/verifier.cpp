#include "bilap/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "bilap/exp_enclosure.hpp"
#include "bilap/operator_l.hpp"

namespace bilap {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::passed: return "passed";
        case CheckStatus::failed: return "failed";
        case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

namespace {

Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

struct Span {
    long lo = 0, hi = 0;  // piece range, inclusive
    long m = 1;           // subintervals per piece
};

Span resolve(const PiecewisePoly& poly, const DimensionParams& p, const VerifyOptions& opt) {
    const long n = poly.grid.n;
    Span r;
    r.lo = opt.piece_lo;
    r.hi = opt.piece_hi < 0 ? n - 1 : opt.piece_hi;
    r.m = opt.m > 0 ? opt.m : p.m;
    if (r.lo < 0 || r.hi >= n || r.lo > r.hi)
        throw std::invalid_argument("verify: piece range out of bounds");
    if (r.m < 1) throw std::invalid_argument("verify: need m >= 1");
    return r;
}

// Work-stealing over pieces; every piece writes only its own result slot, and
// the reduction below scans slots in index order, so the outcome is identical
// for any worker count.
template <typename Fn>
void parallel_pieces(long lo, long hi, int jobs, Fn&& fn) {
    const long count = hi - lo + 1;
    if (count <= 0) return;
    long workers = std::max(1, jobs);
    if (workers > count) workers = count;
    if (workers == 1) {
        for (long j = lo; j <= hi; ++j) fn(j);
        return;
    }
    std::atomic<long> next(lo);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (long k = 0; k < workers; ++k)
        threads.emplace_back([&] {
            for (long j; (j = next.fetch_add(1)) <= hi;) fn(j);
        });
    for (auto& t : threads) t.join();
}

struct Slot {
    bool set = false;
    Rational margin;
    Rational location;
};

// Strict comparisons keep the earliest attaining subpoint on ties.
void update_max(Slot& s, const Rational& v, const Rational& loc) {
    if (!s.set || v > s.margin) {
        s.set = true;
        s.margin = v;
        s.location = loc;
    }
}
void update_min(Slot& s, const Rational& v, const Rational& loc) {
    if (!s.set || v < s.margin) {
        s.set = true;
        s.margin = v;
        s.location = loc;
    }
}

Slot reduce(const std::vector<Slot>& slots, bool want_max) {
    Slot acc;
    for (const Slot& s : slots) {
        if (!s.set) continue;
        if (!acc.set || (want_max ? s.margin > acc.margin : s.margin < acc.margin)) acc = s;
    }
    return acc;
}

CheckResult make_result(std::string name, const Slot& acc, bool pass) {
    CheckResult out;
    out.name = std::move(name);
    out.worst_margin = acc.margin;
    out.worst_location = acc.location;
    out.status = pass ? CheckStatus::passed : CheckStatus::failed;
    return out;
}

}  // namespace

CheckResult check_range(const PiecewisePoly& w, const DimensionParams& p,
                        const VerifyOptions& opt) {
    const Span r = resolve(w, p, opt);
    const Rational delta = w.grid.h / r.m;
    const Rational half_d2 = delta * delta / 2;
    std::vector<Slot> slots(static_cast<size_t>(r.hi - r.lo + 1));
    parallel_pieces(r.lo, r.hi, opt.jobs, [&](long j) {
        const Coeffs& a = w.pieces[j];
        const Rational B2 = coeffs_sup_bound(a, w.grid.h, 2);
        Slot& s = slots[static_cast<size_t>(j - r.lo)];
        for (long i = 0; i < r.m; ++i) {
            const Rational t = delta * Rational(i);
            const Rational w0 = coeffs_deriv_at(a, 0, t);
            const Rational dev = rat_abs(coeffs_deriv_at(a, 1, t)) * delta + B2 * half_d2;
            const Rational margin =
                std::min(Rational(w0 - dev + Rational(3, 2)), Rational(1 - (w0 + dev)));
            update_min(s, margin, w.grid.knot(j) + t);
        }
    });
    Slot acc = reduce(slots, false);
    if (r.lo == 0) {
        const Rational tail_margin = std::min(Rational(w.tail_value + Rational(3, 2)),
                                              Rational(1 - w.tail_value));
        if (!acc.set || tail_margin < acc.margin) {
            acc.set = true;
            acc.margin = tail_margin;
            acc.location = w.grid.x0;
        }
    }
    return make_result("range", acc, acc.margin >= 0);
}

CheckResult check_boundary(const PiecewisePoly& w, const DimensionParams& p) {
    const Rational v0 = rat_abs(w.eval(Rational(0), 0));
    const Rational v1 = rat_abs(w.eval(Rational(0), 1) - 4);
    Slot acc;
    acc.set = true;
    acc.margin = std::max(v0, v1) - p.eps;
    acc.location = Rational(0);
    return make_result("boundary", acc, acc.margin <= 0);
}

CheckResult check_tail(const PiecewisePoly& w, const DimensionParams& p) {
    const Rational K(k_constant(p.N));
    Slot acc;
    acc.set = true;
    acc.location = w.grid.x0;
    if (rat_abs(w.tail_value) > Rational(3, 2)) {
        acc.margin = rat_abs(w.tail_value) - Rational(3, 2);
        return make_result("tail", acc, false);
    }
    const ExpEnclosure e = exp_enclosure(w.tail_value);
    acc.margin = std::max(Rational(K - (p.lambda + p.eps0) * e.lower),
                          Rational((p.lambda - p.eps0) * e.upper - K));
    return make_result("tail", acc, acc.margin <= 0);
}

namespace {

// Shared core of the subsolution / supersolution checks.  With
// ftil = L w + K - lam T14(w) the certified envelope over [x_i, x_i + delta]
// is ftil(x_i) +- (|ftil'(x_i)| delta + M delta^2/2 + E1 + E2 delta), where
//   M  >= sup |ftil''|   (E-terms use |e^x - T14| <= R, |e^x - T13| <= Rd and
//   |T12|, |T13|, |T14| <= 3 on [-3/2, 1], which the range check establishes
//   for the argument w).
CheckResult check_profile_inequality(const PiecewisePoly& w, const DimensionParams& p,
                                     const VerifyOptions& opt, bool super) {
    const Span r = resolve(w, p, opt);
    const OperatorL op = OperatorL::make(p.N);
    const Rational K(k_constant(p.N));
    const Rational lam = super ? Rational(p.lambda - p.eps0) : Rational(p.lambda + p.eps0);
    const Rational& R = exp_remainder_bound();
    const Rational& Rd = exp_deriv_remainder_bound();
    const Rational delta = w.grid.h / r.m;
    const Rational half_d2 = delta * delta / 2;
    const Rational c3(op.c3), c2(op.c2), c1(op.c1);
    const Rational ac3 = rat_abs(c3), ac2 = rat_abs(c2), ac1 = rat_abs(c1);

    std::vector<Slot> slots(static_cast<size_t>(r.hi - r.lo + 1));
    parallel_pieces(r.lo, r.hi, opt.jobs, [&](long j) {
        const Coeffs& a = w.pieces[j];
        Rational B[7];
        for (int l = 1; l <= 6; ++l) B[l] = coeffs_sup_bound(a, w.grid.h, l);
        const Rational M =
            B[6] + ac3 * B[5] + ac2 * B[4] + ac1 * B[3] + 3 * lam * (B[1] * B[1] + B[2]);
        const Rational env_const = M * half_d2 + lam * R + lam * Rd * B[1] * delta;
        Slot& s = slots[static_cast<size_t>(j - r.lo)];
        for (long i = 0; i < r.m; ++i) {
            const Rational t = delta * Rational(i);
            Rational d[6];
            for (int l = 0; l <= 5; ++l) d[l] = coeffs_deriv_at(a, l, t);
            const Rational T14 = taylor_exp(d[0]);
            const Rational T13 = taylor_exp_deriv(d[0]);
            const Rational ftil = d[4] + c3 * d[3] + c2 * d[2] + c1 * d[1] + K - lam * T14;
            const Rational ftp =
                d[5] + c3 * d[4] + c2 * d[3] + c1 * d[2] - lam * T13 * d[1];
            const Rational env = rat_abs(ftp) * delta + env_const;
            const Rational loc = w.grid.knot(j) + t;
            if (super)
                update_min(s, ftil - env, loc);
            else
                update_max(s, ftil + env, loc);
        }
    });
    const Slot acc = reduce(slots, /*want_max=*/!super);
    if (super) return make_result("supersolution", acc, acc.margin >= 0);
    return make_result("subsolution", acc, acc.margin <= 0);
}

}  // namespace

CheckResult check_subsolution(const PiecewisePoly& w, const DimensionParams& p,
                              const VerifyOptions& opt) {
    return check_profile_inequality(w, p, opt, false);
}

CheckResult check_supersolution(const PiecewisePoly& w, const DimensionParams& p,
                                const VerifyOptions& opt) {
    return check_profile_inequality(w, p, opt, true);
}

std::pair<CheckResult, CheckResult> check_psi_positivity(const PiecewisePoly& psi,
                                                         const DimensionParams& p,
                                                         const VerifyOptions& opt) {
    const Span r = resolve(psi, p, opt);
    const long n = psi.grid.n;
    const Rational delta = psi.grid.h / r.m;
    const Rational half_d2 = delta * delta / 2;
    const long pieces = r.hi - r.lo + 1;
    const long total = pieces * r.m;

    // Pass A: direct minorant psi(x_i) - |psi'(x_i)| delta - S2 delta^2/2.
    struct PieceA {
        Slot plain;           // min minorant over the whole piece
        long first_fail = -1; // first subpoint with a negative minorant
    };
    std::vector<PieceA> A(static_cast<size_t>(pieces));
    parallel_pieces(r.lo, r.hi, opt.jobs, [&](long j) {
        const Coeffs& a = psi.pieces[j];
        const Rational S2 = coeffs_sup_bound(a, psi.grid.h, 2);
        PieceA& pa = A[static_cast<size_t>(j - r.lo)];
        for (long i = 0; i < r.m; ++i) {
            const Rational t = delta * Rational(i);
            const Rational v = coeffs_deriv_at(a, 0, t) -
                               (rat_abs(coeffs_deriv_at(a, 1, t)) * delta + S2 * half_d2);
            if (v < 0 && pa.first_fail < 0) pa.first_fail = i;
            update_min(pa.plain, v, psi.grid.knot(j) + t);
        }
    });

    long k = total;  // first failing global subpoint, total when none fails
    long k_piece = r.hi + 1, k_sub = 0;
    for (long j = r.lo; j <= r.hi; ++j) {
        const PieceA& pa = A[static_cast<size_t>(j - r.lo)];
        if (pa.first_fail >= 0) {
            k = (j - r.lo) * r.m + pa.first_fail;
            k_piece = j;
            k_sub = pa.first_fail;
            break;
        }
    }

    // psi_positive covers [x_lo, x_k] by the direct minorant (prefix), plus
    // the constant tail; the suffix [x_k, 0] is delegated to psi_slope, which
    // is only sound when the covered range actually reaches s = 0.
    Slot pos;
    for (long j = r.lo; j < k_piece; ++j) {
        const PieceA& pa = A[static_cast<size_t>(j - r.lo)];
        if (pa.plain.set && (!pos.set || pa.plain.margin < pos.margin)) pos = pa.plain;
    }
    if (k < total && k_sub > 0) {
        const Coeffs& a = psi.pieces[k_piece];
        const Rational S2 = coeffs_sup_bound(a, psi.grid.h, 2);
        for (long i = 0; i < k_sub; ++i) {
            const Rational t = delta * Rational(i);
            const Rational v = coeffs_deriv_at(a, 0, t) -
                               (rat_abs(coeffs_deriv_at(a, 1, t)) * delta + S2 * half_d2);
            update_min(pos, v, psi.grid.knot(k_piece) + t);
        }
    }
    bool pos_ok = true;
    if (r.lo == 0) {
        if (!pos.set || psi.tail_value < pos.margin) {
            pos.set = true;
            pos.margin = psi.tail_value;
            pos.location = psi.grid.x0;
        }
        if (psi.tail_value < 0) pos_ok = false;
    }
    if (k < total && r.hi != n - 1) {
        // A failing subpoint cannot be rescued by end monotonicity when the
        // verified range stops short of s = 0: report the full direct scan.
        pos = reduce([&] {
            std::vector<Slot> all;
            all.reserve(A.size());
            for (const PieceA& pa : A) all.push_back(pa.plain);
            return all;
        }(), false);
        pos_ok = false;
    }
    if (!pos.set) {  // empty prefix: anchor the report at the range start
        pos.set = true;
        pos.margin = Rational(0);
        pos.location = psi.grid.knot(r.lo);
    }
    CheckResult positive = make_result("psi_positive", pos, pos_ok && pos.margin >= 0);

    // Pass B: on the suffix, certify psi' <= 0 via the majorant
    // psi'(x_i) + |psi''(x_i)| delta + S3 delta^2/2, and psi(0) = 0 exactly;
    // then psi decreases onto 0, hence stays nonnegative there.
    CheckResult slope;
    slope.name = "psi_slope";
    if (k >= total) {
        slope.status = CheckStatus::passed;
        slope.worst_margin = Rational(0);
        slope.worst_location = Rational(0);
    } else {
        std::vector<Slot> sl(static_cast<size_t>(r.hi - k_piece + 1));
        parallel_pieces(k_piece, r.hi, opt.jobs, [&](long j) {
            const Coeffs& a = psi.pieces[j];
            const Rational S3 = coeffs_sup_bound(a, psi.grid.h, 3);
            Slot& s = sl[static_cast<size_t>(j - k_piece)];
            const long i0 = (j == k_piece) ? k_sub : 0;
            for (long i = i0; i < r.m; ++i) {
                const Rational t = delta * Rational(i);
                const Rational v = coeffs_deriv_at(a, 1, t) +
                                   rat_abs(coeffs_deriv_at(a, 2, t)) * delta + S3 * half_d2;
                update_max(s, v, psi.grid.knot(j) + t);
            }
        });
        const Slot acc = reduce(sl, true);
        const Rational end_value = psi.eval(Rational(0), 0);
        if (end_value != 0) {
            Slot bad;
            bad.set = true;
            bad.margin = rat_abs(end_value);
            bad.location = Rational(0);
            slope = make_result("psi_slope", bad, false);
        } else {
            slope = make_result("psi_slope", acc, acc.margin <= 0);
        }
    }
    return {positive, slope};
}

CheckResult check_alpha(const PiecewisePoly& w, const DimensionParams& p) {
    Slot acc;
    acc.set = true;
    acc.location = w.grid.x0;
    const Rational window = std::min(p.alpha, Rational(Rational(p.N - 4) / 2 - p.alpha));
    if (!(window > 0)) {
        acc.margin = window;
        return make_result("alpha", acc, false);
    }
    if (rat_abs(w.tail_value) > Rational(3, 2)) {
        acc.margin = Rational(3, 2) - rat_abs(w.tail_value);
        return make_result("alpha", acc, false);
    }
    const ExpEnclosure e = exp_enclosure(w.tail_value);
    acc.margin = indicial_eval(p.N, p.alpha) - p.beta * e.upper;
    return make_result("alpha", acc, acc.margin >= 0);
}

CheckResult check_stability(const PiecewisePoly& w, const PiecewisePoly& psi,
                            const DimensionParams& p, const VerifyOptions& opt) {
    if (!(w.grid == psi.grid))
        throw std::invalid_argument("check_stability: profile grids differ");
    const Span r = resolve(w, p, opt);
    const TAlpha ta = TAlpha::make(p.N, p.alpha);
    const Rational beta = p.beta;
    const Rational& R = exp_remainder_bound();
    const Rational& Rd = exp_deriv_remainder_bound();
    const Rational delta = w.grid.h / r.m;
    const Rational half_d2 = delta * delta / 2;
    const Rational at3 = rat_abs(ta.t3), at2 = rat_abs(ta.t2), at1 = rat_abs(ta.t1),
                   at0 = rat_abs(ta.t0);

    std::vector<Slot> slots(static_cast<size_t>(r.hi - r.lo + 1));
    parallel_pieces(r.lo, r.hi, opt.jobs, [&](long j) {
        const Coeffs& aw = w.pieces[j];
        const Coeffs& ap = psi.pieces[j];
        const Rational Bw1 = coeffs_sup_bound(aw, w.grid.h, 1);
        const Rational Bw2 = coeffs_sup_bound(aw, w.grid.h, 2);
        Rational S[7];
        for (int l = 0; l <= 6; ++l) S[l] = coeffs_sup_bound(ap, w.grid.h, l);
        // sup |gtil''| with gtil = T_alpha psi - beta T14(w) psi; the Taylor
        // factors are bounded by 3 on [-3/2, 1].
        const Rational Mg = S[6] + at3 * S[5] + at2 * S[4] + at1 * S[3] + at0 * S[2] +
                            3 * beta * (Bw1 * Bw1 * S[0] + Bw2 * S[0] + 2 * Bw1 * S[1] + S[2]);
        // |(e^w - T14(w)) psi| <= R S0; d/ds of it is
        // (e^w - T13(w)) w' psi + (e^w - T14(w)) psi'.
        const Rational env_const =
            Mg * half_d2 + beta * R * S[0] + beta * (Rd * Bw1 * S[0] + R * S[1]) * delta;
        Slot& s = slots[static_cast<size_t>(j - r.lo)];
        for (long i = 0; i < r.m; ++i) {
            const Rational t = delta * Rational(i);
            const Rational w0 = coeffs_deriv_at(aw, 0, t);
            const Rational w1 = coeffs_deriv_at(aw, 1, t);
            Rational z[6];
            for (int l = 0; l <= 5; ++l) z[l] = coeffs_deriv_at(ap, l, t);
            const Rational T14 = taylor_exp(w0);
            const Rational T13 = taylor_exp_deriv(w0);
            const Rational g = z[4] + ta.t3 * z[3] + ta.t2 * z[2] + ta.t1 * z[1] +
                               ta.t0 * z[0] - beta * T14 * z[0];
            const Rational gp = z[5] + ta.t3 * z[4] + ta.t2 * z[3] + ta.t1 * z[2] +
                                ta.t0 * z[1] - beta * (T13 * w1 * z[0] + T14 * z[1]);
            update_min(s, g - (rat_abs(gp) * delta + env_const), w.grid.knot(j) + t);
        }
    });
    const Slot acc = reduce(slots, false);
    return make_result("stability", acc, acc.margin >= 0);
}

const CheckResult& VerifyReport::by_name(const std::string& name) const {
    for (const CheckResult& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
}

VerifyReport verify_all(const PiecewisePoly& w, const PiecewisePoly& psi,
                        const DimensionParams& p, const VerifyOptions& opt) {
    if (!(w.grid == psi.grid))
        throw std::invalid_argument("verify_all: profile grids differ");
    if (!(w.grid == p.grid))
        throw std::invalid_argument("verify_all: profile grid does not match parameters");

    VerifyReport rep;
    rep.checks.resize(9);
    auto skipped = [](const char* name) {
        CheckResult c;
        c.name = name;
        c.status = CheckStatus::skipped;
        c.worst_margin = Rational(0);
        c.worst_location = Rational(0);
        return c;
    };
    for (size_t i = 0; i < 9; ++i)
        rep.checks[i] = skipped(std::array<const char*, 9>{
            "range", "boundary", "tail", "subsolution", "supersolution", "psi_positive",
            "psi_slope", "alpha", "stability"}[i]);

    bool alive = true;
    auto run = [&](size_t idx, auto&& fn) {
        if (!alive) return;
        rep.checks[idx] = fn();
        if (!rep.checks[idx].ok()) alive = false;
    };
    run(0, [&] { return check_range(w, p, opt); });
    run(1, [&] { return check_boundary(w, p); });
    run(2, [&] { return check_tail(w, p); });
    run(3, [&] { return check_subsolution(w, p, opt); });
    run(4, [&] { return check_supersolution(w, p, opt); });
    if (alive) {
        const auto pair = check_psi_positivity(psi, p, opt);
        rep.checks[5] = pair.first;
        if (pair.first.ok()) {
            rep.checks[6] = pair.second;
            alive = pair.second.ok();
        } else {
            alive = false;
        }
    }
    run(7, [&] { return check_alpha(w, p); });
    run(8, [&] { return check_stability(w, psi, p, opt); });

    rep.all_passed = true;
    for (const CheckResult& c : rep.checks)
        if (!c.ok()) rep.all_passed = false;
    return rep;
}

}  // namespace bilap
