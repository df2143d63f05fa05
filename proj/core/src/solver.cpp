#include "bilap/solver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "bilap/operator_l.hpp"
#include "bilap/params.hpp"

namespace bilap {

namespace {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<double, 16>;  // row-major

Vec4 mat_vec(const Mat4& A, const Vec4& x) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += A[4 * i + j] * x[j];
    return r;
}

Mat4 mat_mul(const Mat4& A, const Mat4& B) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const double a = A[4 * i + k];
            for (int j = 0; j < 4; ++j) r[4 * i + j] += a * B[4 * k + j];
        }
    return r;
}

// Column-major LAPACK band storage for an M x M matrix with KL = 6, KU = 4.
struct BandMatrix {
    static constexpr lapack_int KL = 6;
    static constexpr lapack_int KU = 4;
    lapack_int M = 0;
    lapack_int ldab = 2 * KL + KU + 1;
    std::vector<double> ab;
    std::vector<lapack_int> ipiv;

    explicit BandMatrix(lapack_int m) : M(m), ab(static_cast<size_t>(ldab) * m, 0.0), ipiv(m) {}

    void clear() { std::fill(ab.begin(), ab.end(), 0.0); }

    double& at(lapack_int i, lapack_int j) {
        // valid when max(0, j-KU) <= i <= min(M-1, j+KL)
        return ab[static_cast<size_t>(j) * ldab + (KL + KU + i - j)];
    }

    void add(lapack_int i, lapack_int j, double v) { at(i, j) += v; }

    // Factor in place and solve for nrhs right-hand sides (overwritten).
    void factor_solve(double* rhs, lapack_int nrhs) {
        lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, M, M, KL, KU, ab.data(), ldab,
                                         ipiv.data());
        if (info != 0)
            throw std::runtime_error("banded factorization failed, info = " +
                                     std::to_string(info));
        info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', M, KL, KU, nrhs, ab.data(), ldab,
                              ipiv.data(), rhs, M);
        if (info != 0)
            throw std::runtime_error("banded solve failed, info = " + std::to_string(info));
    }
};

// Right-hand side of the first-order system for the profile equation:
// f(y) = (y1, y2, y3, lambda e^{y0} - K - c3 y3 - c2 y2 - c1 y1).
struct WSystem {
    OperatorL op;
    double K;

    Vec4 f(const Vec4& y, double lambda) const {
        return {y[1], y[2], y[3],
                lambda * std::exp(y[0]) - K - op.c3 * y[3] - op.c2 * y[2] - op.c1 * y[1]};
    }
    Mat4 jac(const Vec4& y, double lambda) const {
        Mat4 J{};
        J[4 * 0 + 1] = 1.0;
        J[4 * 1 + 2] = 1.0;
        J[4 * 2 + 3] = 1.0;
        J[4 * 3 + 0] = lambda * std::exp(y[0]);
        J[4 * 3 + 1] = -static_cast<double>(op.c1);
        J[4 * 3 + 2] = -static_cast<double>(op.c2);
        J[4 * 3 + 3] = -static_cast<double>(op.c3);
        return J;
    }
    static Vec4 f_lambda(const Vec4& y) { return {0.0, 0.0, 0.0, std::exp(y[0])}; }
};

// Hermite-Simpson interval residual and its derivative blocks.
//   Phi = y1 - y0 - (h/6)(f0 + 4 fm + f1),  ym = (y0+y1)/2 + (h/8)(f0 - f1)
struct IntervalBlocks {
    Vec4 phi;
    Mat4 d_y0;
    Mat4 d_y1;
    Vec4 d_lambda;
    Vec4 ym;
};

IntervalBlocks interval_blocks(const WSystem& sys, const Vec4& y0, const Vec4& y1, double h,
                               double lambda, bool want_jac) {
    IntervalBlocks b{};
    const Vec4 f0 = sys.f(y0, lambda);
    const Vec4 f1 = sys.f(y1, lambda);
    for (int k = 0; k < 4; ++k) b.ym[k] = 0.5 * (y0[k] + y1[k]) + (h / 8.0) * (f0[k] - f1[k]);
    const Vec4 fm = sys.f(b.ym, lambda);
    for (int k = 0; k < 4; ++k)
        b.phi[k] = y1[k] - y0[k] - (h / 6.0) * (f0[k] + 4.0 * fm[k] + f1[k]);
    if (!want_jac) return b;

    const Mat4 J0 = sys.jac(y0, lambda);
    const Mat4 J1 = sys.jac(y1, lambda);
    const Mat4 Jm = sys.jac(b.ym, lambda);
    const Mat4 Jm_J0 = mat_mul(Jm, J0);
    const Mat4 Jm_J1 = mat_mul(Jm, J1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double id = (i == j) ? 1.0 : 0.0;
            b.d_y0[4 * i + j] = -id - (h / 6.0) * J0[4 * i + j] - (h / 3.0) * Jm[4 * i + j] -
                                (h * h / 12.0) * Jm_J0[4 * i + j];
            b.d_y1[4 * i + j] = id - (h / 6.0) * J1[4 * i + j] - (h / 3.0) * Jm[4 * i + j] +
                                (h * h / 12.0) * Jm_J1[4 * i + j];
        }
    const Vec4 fl0 = WSystem::f_lambda(y0);
    const Vec4 fl1 = WSystem::f_lambda(y1);
    const Vec4 flm = WSystem::f_lambda(b.ym);
    Vec4 dfl{};
    for (int k = 0; k < 4; ++k) dfl[k] = fl0[k] - fl1[k];
    const Vec4 Jm_dfl = mat_vec(Jm, dfl);
    for (int k = 0; k < 4; ++k)
        b.d_lambda[k] =
            -(h / 6.0) * (fl0[k] + 4.0 * flm[k] + fl1[k]) - (h * h / 12.0) * Jm_dfl[k];
    return b;
}

// Residual layout for the w Newton system (M = 4n + 4 banded rows, plus the
// bordered slope row w'(0) = t and bordered column d/d lambda):
//   row 0:            w(x0) - log(K/lambda)          (col 0, border col)
//   row 1:            w''(x0)                        (col 2)
//   row 2:            w'''(x0)                       (col 3)
//   rows 3 .. 4n+2:   interval residuals             (cols 4i .. 4i+7)
//   row 4n+3:         w(0)                           (col 4n)
//   border row:       w'(0) - t                      (col 4n+1)
struct WResidual {
    std::vector<double> F;  // size 4n+4
    double Fb = 0.0;        // border row
    double max_norm = 0.0;
};

WResidual w_residual(const WSystem& sys, const std::vector<Vec4>& y, double lambda, double h,
                     double t_target) {
    const long n = static_cast<long>(y.size()) - 1;
    WResidual r;
    r.F.assign(4 * n + 4, 0.0);
    r.F[0] = y[0][0] - std::log(sys.K / lambda);
    r.F[1] = y[0][2];
    r.F[2] = y[0][3];
    for (long i = 0; i < n; ++i) {
        const IntervalBlocks b = interval_blocks(sys, y[i], y[i + 1], h, lambda, false);
        for (int k = 0; k < 4; ++k) r.F[3 + 4 * i + k] = b.phi[k];
    }
    r.F[4 * n + 3] = y[n][0];
    r.Fb = y[n][1] - t_target;
    r.max_norm = std::abs(r.Fb);
    for (double v : r.F) r.max_norm = std::max(r.max_norm, std::abs(v));
    return r;
}

// One bordered Newton step; returns the residual max-norm *before* the step.
double w_newton_step(const WSystem& sys, std::vector<Vec4>& y, double& lambda, double h,
                     double t_target) {
    const long n = static_cast<long>(y.size()) - 1;
    const lapack_int M = static_cast<lapack_int>(4 * n + 4);
    const WResidual res = w_residual(sys, y, lambda, h, t_target);

    BandMatrix B(M);
    std::vector<double> rhs(2 * static_cast<size_t>(M), 0.0);  // [p | q], column-major
    double* p = rhs.data();
    double* q = rhs.data() + M;
    for (lapack_int i = 0; i < M; ++i) p[i] = -res.F[i];

    // Boundary rows at x0.
    B.add(0, 0, 1.0);
    q[0] = 1.0 / lambda;  // d/d lambda of -log(K/lambda)
    B.add(1, 2, 1.0);
    B.add(2, 3, 1.0);
    // Interval rows.
    for (long i = 0; i < n; ++i) {
        const IntervalBlocks b = interval_blocks(sys, y[i], y[i + 1], h, lambda, true);
        const lapack_int row0 = static_cast<lapack_int>(3 + 4 * i);
        const lapack_int col0 = static_cast<lapack_int>(4 * i);
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c) {
                B.add(row0 + a, col0 + c, b.d_y0[4 * a + c]);
                B.add(row0 + a, col0 + 4 + c, b.d_y1[4 * a + c]);
            }
        for (int a = 0; a < 4; ++a) q[row0 + a] = b.d_lambda[a];
    }
    // Terminal value row.
    B.add(static_cast<lapack_int>(4 * n + 3), static_cast<lapack_int>(4 * n), 1.0);

    B.factor_solve(rhs.data(), 2);

    // Border elimination: the slope row reads component 4n+1, d(Fb)/d lambda = 0.
    const lapack_int slope = static_cast<lapack_int>(4 * n + 1);
    const double denom = q[slope];
    if (denom == 0.0 || !std::isfinite(denom))
        throw std::runtime_error("bordered Newton system is singular");
    const double dlambda = (p[slope] + res.Fb) / denom;
    lambda += dlambda;
    for (long j = 0; j <= n; ++j)
        for (int k = 0; k < 4; ++k) y[j][k] += p[4 * j + k] - q[4 * j + k] * dlambda;
    return res.max_norm;
}

// Newton iteration at a fixed slope target. Returns true on convergence.
bool w_newton(const WSystem& sys, std::vector<Vec4>& y, double& lambda, double h,
              double t_target, const SolveOptions& opt, double* out_residual) {
    for (int it = 0; it < opt.max_newton; ++it) {
        const double before = w_newton_step(sys, y, lambda, h, t_target);
        if (!std::isfinite(before) || before > 1e12 || !std::isfinite(lambda) || lambda <= 0)
            return false;
        if (before < opt.newton_tol) {
            if (out_residual) *out_residual = w_residual(sys, y, lambda, h, t_target).max_norm;
            return true;
        }
    }
    const double final_res = w_residual(sys, y, lambda, h, t_target).max_norm;
    if (out_residual) *out_residual = final_res;
    return final_res < opt.newton_tol;
}

}  // namespace

BranchState solve_branch(int N, const SolveOptions& opt) {
    if (N < kDimMin || N > kDimMax)
        throw std::domain_error("solve_branch: N outside the certified window [13, 31]");
    if (opt.n < 1) throw std::invalid_argument("solve_branch: need n >= 1");
    if (!(opt.x0 < 0)) throw std::invalid_argument("solve_branch: need x0 < 0");
    const WSystem sys{OperatorL::make(N), static_cast<double>(k_constant(N))};
    const double h = to_double(Rational(-opt.x0) / opt.n);
    const long n = opt.n;

    // Exact start of the branch: w == 0, lambda = K at slope target 0.
    std::vector<Vec4> y(n + 1, Vec4{0.0, 0.0, 0.0, 0.0});
    double lambda = sys.K;

    std::vector<Vec4> y_prev = y;
    double lambda_prev = lambda;
    double t = 0.0, t_prev = 0.0;
    double dt = opt.dt0;
    int steps = 0;
    double residual = 0.0;

    while (t < 4.0) {
        const double t_next = std::min(4.0, t + dt);
        // Secant predictor from the last two accepted states.
        std::vector<Vec4> y_try = y;
        double lambda_try = lambda;
        if (t > t_prev) {
            const double s = (t_next - t) / (t - t_prev);
            for (long j = 0; j <= n; ++j)
                for (int k = 0; k < 4; ++k) y_try[j][k] += s * (y[j][k] - y_prev[j][k]);
            lambda_try += s * (lambda - lambda_prev);
        }
        if (w_newton(sys, y_try, lambda_try, h, t_next, opt, &residual)) {
            y_prev = y;
            lambda_prev = lambda;
            t_prev = t;
            y = std::move(y_try);
            lambda = lambda_try;
            t = t_next;
            ++steps;
            dt = std::min(opt.dt0, dt * 1.5);
        } else {
            dt *= 0.5;
            if (dt < opt.dt_floor)
                throw std::runtime_error("continuation stalled at slope target " +
                                         std::to_string(t));
        }
    }

    BranchState out;
    out.N = N;
    out.x0 = opt.x0;
    out.n = n;
    out.h = h;
    out.y = std::move(y);
    out.lambda_hat = lambda;
    out.residual = residual;
    out.continuation_steps = steps;
    return out;
}

namespace {

// Affine first-order system for the auxiliary profile:
// f(z) = A(s) z + b,  A row 3 = (beta e^{w(s)} - t0, -t1, -t2, -t3), b = e4.
struct PsiSystem {
    double t3, t2, t1, t0;
    double beta_bar;

    Mat4 A(double w_val) const {
        Mat4 M{};
        M[4 * 0 + 1] = 1.0;
        M[4 * 1 + 2] = 1.0;
        M[4 * 2 + 3] = 1.0;
        M[4 * 3 + 0] = beta_bar * std::exp(w_val) - t0;
        M[4 * 3 + 1] = -t1;
        M[4 * 3 + 2] = -t2;
        M[4 * 3 + 3] = -t3;
        return M;
    }
};

}  // namespace

EigenState solve_eigen_profile(const BranchState& w, double beta_bar, const SolveOptions& opt) {
    (void)opt;  // grid and tolerances are inherited from the w solve
    const long n = w.n;
    const double h = w.h;
    const WSystem wsys{OperatorL::make(w.N), static_cast<double>(k_constant(w.N))};

    // Interval midpoint values of w, consistent with the collocation scheme.
    std::vector<double> w_mid(n);
    for (long i = 0; i < n; ++i)
        w_mid[i] =
            interval_blocks(wsys, w.y[i], w.y[i + 1], h, w.lambda_hat, false).ym[0];

    const double rhs_target = beta_bar * std::exp(w.y[0][0]);
    const double alpha_hat = find_alpha_bar(w.N, rhs_target);
    PsiSystem sys{};
    sys.beta_bar = beta_bar;
    const double a = alpha_hat, c3 = 2.0 * (w.N - 4);
    const double c2 = static_cast<double>(w.N) * w.N - 10.0 * w.N + 20.0;
    const double c1 = -2.0 * (w.N - 2) * (w.N - 4);
    sys.t3 = -4.0 * a + c3;
    sys.t2 = 6.0 * a * a - 3.0 * c3 * a + c2;
    sys.t1 = -4.0 * a * a * a + 3.0 * c3 * a * a - 2.0 * c2 * a + c1;
    sys.t0 = indicial_eval_d(w.N, a);

    // The discrete system is affine in the unknowns, so a single bordered-free
    // banded solve of J z = -F(0) is exact up to roundoff.
    const lapack_int M = static_cast<lapack_int>(4 * n + 4);
    BandMatrix B(M);
    std::vector<double> rhs(M, 0.0);

    B.add(0, 0, 1.0);
    rhs[0] = 1.0;  // psi(x0) = 1
    B.add(1, 2, 1.0);
    B.add(2, 3, 1.0);
    const Vec4 b_vec{0.0, 0.0, 0.0, 1.0};
    for (long i = 0; i < n; ++i) {
        const Mat4 A0 = sys.A(w.y[i][0]);
        const Mat4 A1 = sys.A(w.y[i + 1][0]);
        const Mat4 Am = sys.A(w_mid[i]);
        const Mat4 Am_A0 = mat_mul(Am, A0);
        const Mat4 Am_A1 = mat_mul(Am, A1);
        const lapack_int row0 = static_cast<lapack_int>(3 + 4 * i);
        const lapack_int col0 = static_cast<lapack_int>(4 * i);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                const double id = (r == c) ? 1.0 : 0.0;
                B.add(row0 + r, col0 + c,
                      -id - (h / 6.0) * A0[4 * r + c] - (h / 3.0) * Am[4 * r + c] -
                          (h * h / 12.0) * Am_A0[4 * r + c]);
                B.add(row0 + r, col0 + 4 + c,
                      id - (h / 6.0) * A1[4 * r + c] - (h / 3.0) * Am[4 * r + c] +
                          (h * h / 12.0) * Am_A1[4 * r + c]);
            }
        // -F(0) on interval rows: F(0) = -(h/6)(b + 4b + b) = -h b.
        for (int r = 0; r < 4; ++r) rhs[row0 + r] = h * b_vec[r];
    }
    B.add(static_cast<lapack_int>(4 * n + 3), static_cast<lapack_int>(4 * n), 1.0);
    // rhs[4n+3] = 0: psi(0) = 0.

    B.factor_solve(rhs.data(), 1);

    EigenState out;
    out.alpha_hat = alpha_hat;
    out.y.resize(n + 1);
    for (long j = 0; j <= n; ++j)
        for (int k = 0; k < 4; ++k) out.y[j][k] = rhs[4 * j + k];

    // Confirm the affine solve: evaluate the residual at the solution.
    double worst = std::max({std::abs(out.y[0][0] - 1.0), std::abs(out.y[0][2]),
                             std::abs(out.y[0][3]), std::abs(out.y[n][0])});
    for (long i = 0; i < n; ++i) {
        Vec4 f0 = mat_vec(sys.A(w.y[i][0]), out.y[i]);
        Vec4 f1 = mat_vec(sys.A(w.y[i + 1][0]), out.y[i + 1]);
        for (int k = 0; k < 4; ++k) {
            f0[k] += b_vec[k];
            f1[k] += b_vec[k];
        }
        Vec4 ym{};
        for (int k = 0; k < 4; ++k)
            ym[k] = 0.5 * (out.y[i][k] + out.y[i + 1][k]) + (h / 8.0) * (f0[k] - f1[k]);
        Vec4 fm = mat_vec(sys.A(w_mid[i]), ym);
        for (int k = 0; k < 4; ++k) fm[k] += b_vec[k];
        for (int k = 0; k < 4; ++k) {
            const double phi = out.y[i + 1][k] - out.y[i][k] -
                               (h / 6.0) * (f0[k] + 4.0 * fm[k] + f1[k]);
            worst = std::max(worst, std::abs(phi));
        }
    }
    out.residual = worst;
    return out;
}

ProfileSamples w_samples(const BranchState& w) {
    const OperatorL op = OperatorL::make(w.N);
    const double K = static_cast<double>(k_constant(w.N));
    ProfileSamples s;
    s.N = w.N;
    s.x0 = to_double(w.x0);
    s.n = w.n;
    s.lambda_hat = w.lambda_hat;
    s.d4.resize(w.n + 1);
    for (long j = 0; j <= w.n; ++j) {
        const Vec4& y = w.y[j];
        s.d4[j] = w.lambda_hat * std::exp(y[0]) - K - op.c3 * y[3] - op.c2 * y[2] - op.c1 * y[1];
    }
    return s;
}

ProfileSamples psi_samples(const BranchState& w, const EigenState& psi, double beta_bar) {
    const double a = psi.alpha_hat, c3 = 2.0 * (w.N - 4);
    const double c2 = static_cast<double>(w.N) * w.N - 10.0 * w.N + 20.0;
    const double c1 = -2.0 * (w.N - 2) * (w.N - 4);
    const double t3 = -4.0 * a + c3;
    const double t2 = 6.0 * a * a - 3.0 * c3 * a + c2;
    const double t1 = -4.0 * a * a * a + 3.0 * c3 * a * a - 2.0 * c2 * a + c1;
    const double t0 = indicial_eval_d(w.N, a);

    ProfileSamples s;
    s.N = w.N;
    s.x0 = to_double(w.x0);
    s.n = w.n;
    s.lambda_hat = w.lambda_hat;
    s.d4.resize(w.n + 1);
    for (long j = 0; j <= w.n; ++j) {
        const Vec4& z = psi.y[j];
        s.d4[j] = 1.0 + (beta_bar * std::exp(w.y[j][0]) - t0) * z[0] - t1 * z[1] - t2 * z[2] -
                  t3 * z[3];
    }
    return s;
}

}  // namespace bilap
