// Floating-point candidate generation: branch continuation for the profile
// BVP, the linear auxiliary solve, and indicial-quartic root isolation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "bilap/operator_l.hpp"
#include "bilap/params.hpp"
#include "bilap/samples.hpp"
#include "bilap/solver.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bilap;

TEST_CASE("operator coefficients are the exact integers") {
    const OperatorL op = OperatorL::make(13);
    CHECK(op.c3 == 18);
    CHECK(op.c2 == 59);
    CHECK(op.c1 == -198);
    CHECK(k_constant(13) == 792);
    CHECK(k_constant(31) == 6264);

    const TAlpha t0 = TAlpha::make(13, Rational(0));
    CHECK(t0.t3 == 18);
    CHECK(t0.t2 == 59);
    CHECK(t0.t1 == -198);
    CHECK(t0.t0 == 0);
}

TEST_CASE("indicial quartic: pinned values and sign change") {
    CHECK(indicial_eval(13, Rational(3)) == 720);
    CHECK(indicial_eval(13, Rational(4)) == 840);
    CHECK(indicial_eval(13, Rational(0)) == 0);
    CHECK(indicial_eval(13, Rational(39, 10)) == Rational(8331921, 10000));
    // 720 < 792 < 840 brackets the admissible root between 3 and 4
    CHECK(indicial_eval(13, Rational(3)) < k_constant(13));
    CHECK(k_constant(13) < indicial_eval(13, Rational(4)));
    CHECK(indicial_eval_d(13, 3.0) == doctest::Approx(720.0));
}

TEST_CASE("indicial_roots: counts, window, and Vieta cross-check") {
    for (int N = 13; N <= 31; ++N) {
        const double rhs = static_cast<double>(k_constant(N));
        const auto roots = indicial_roots(N, rhs);
        CHECK(roots.size() == 4);
        for (size_t i = 1; i < roots.size(); ++i) CHECK(roots[i - 1] < roots[i]);

        const double half_window = (N - 4) / 2.0;
        int admissible = 0, negative = 0, above = 0;
        for (double r : roots) {
            if (r > 0.0 && r < half_window) ++admissible;
            if (r < 0.0) ++negative;
            if (r > half_window) ++above;
        }
        CHECK(admissible == 1);
        CHECK(negative == 1);
        CHECK(above == 2);

        // quartic a^4 - 2(N-4)a^3 + (N^2-10N+20)a^2 + 2(N-2)(N-4)a - rhs:
        // with all four roots real, Vieta gives their sum and product.
        const OperatorL op = OperatorL::make(N);
        double sum = 0.0, prod = 1.0;
        for (double r : roots) {
            sum += r;
            prod *= r;
        }
        CHECK(std::abs(sum - static_cast<double>(op.c3)) < 1e-8 * std::abs(sum));
        CHECK(std::abs(prod - (-rhs)) < 1e-8 * rhs);

        // each returned root actually solves the quartic
        for (double r : roots) CHECK(std::abs(indicial_eval_d(N, r) - rhs) < 1e-6 * (1 + rhs));
    }

    CHECK(indicial_roots(12, static_cast<double>(k_constant(12))).size() == 2);

    const auto r13 = indicial_roots(13, 792.0);
    bool in_3_4 = false;
    for (double r : r13) in_3_4 = in_3_4 || (r > 3.0 && r < 4.0);
    CHECK(in_3_4);

    // rhs = 0 factors out the root alpha = 0
    const auto r0 = indicial_roots(13, 0.0);
    bool has_zero = false;
    for (double r : r0) has_zero = has_zero || std::abs(r) < 1e-12;
    CHECK(has_zero);
}

TEST_CASE("find_alpha_bar solves in the admissible window") {
    const double rhs = 2550.0 * 792.0 / 2438.6;  // beta_bar e^{w(x0)} scale for N = 13
    const double a = find_alpha_bar(13, rhs);
    CHECK(a > 0.0);
    CHECK(a < 4.5);
    CHECK(std::abs(indicial_eval_d(13, a) - rhs) < 1e-7 * rhs);
    CHECK_THROWS_AS(find_alpha_bar(13, -5.0), std::runtime_error);
}

TEST_CASE("branch continuation reaches the table lambda on a coarse grid") {
    SolveOptions opt;
    opt.n = 600;  // coarse but fourth-order accurate: lambda error ~ 1e-7
    const BranchState b = solve_branch(13, opt);

    CHECK(b.N == 13);
    CHECK(b.n == 600);
    CHECK(b.residual < 1e-10);
    CHECK(b.continuation_steps >= 40);
    CHECK(std::abs(b.lambda_hat - 2438.589) < 0.05);

    // boundary conditions at both ends
    const size_t last = static_cast<size_t>(b.n);
    CHECK(std::abs(b.y[last][0]) < 1e-9);        // w(0) = 0
    CHECK(std::abs(b.y[last][1] - 4.0) < 1e-9);  // w'(0) = 4
    CHECK(std::abs(b.y[0][0] - std::log(792.0 / b.lambda_hat)) < 1e-8);
    CHECK(std::abs(b.y[0][2]) < 1e-9);  // w''(x0) = 0
    CHECK(std::abs(b.y[0][3]) < 1e-9);  // w'''(x0) = 0

    const EigenState e = solve_eigen_profile(b, 2550.0, opt);
    CHECK(e.residual < 1e-10);
    CHECK(std::abs(e.y[0][0] - 1.0) < 1e-12);  // psi(x0) = 1
    CHECK(std::abs(e.y[last][0]) < 1e-9);      // psi(0) = 0
    CHECK(e.y[last][1] < 0.0);                 // psi decreases onto its terminal zero
    CHECK(e.alpha_hat > 0.0);
    CHECK(e.alpha_hat < 4.5);
    const double rhs = 2550.0 * std::exp(b.y[0][0]);
    CHECK(std::abs(indicial_eval_d(13, e.alpha_hat) - rhs) < 1e-6 * rhs);
}

TEST_CASE("auxiliary profile stays positive inside the window (N = 20)") {
    SolveOptions opt;
    opt.n = 600;
    const BranchState b = solve_branch(20, opt);
    CHECK(std::abs(b.lambda_hat - 6585.1) < 0.1);
    const EigenState e = solve_eigen_profile(b, 7000.0, opt);
    CHECK(e.residual < 1e-10);
    CHECK(e.y[static_cast<size_t>(b.n)][1] < 0.0);  // psi'(0) < 0
    bool positive_inside = true;
    for (long j = 0; j < b.n; ++j) positive_inside = positive_inside && e.y[static_cast<size_t>(j)][0] > 0.0;
    CHECK(positive_inside);
}

TEST_CASE("samples round trip bit-exactly through the text format") {
    SolveOptions opt;
    opt.n = 120;
    const BranchState b = solve_branch(13, opt);
    const ProfileSamples s = w_samples(b);
    CHECK(s.N == 13);
    CHECK(s.n == 120);
    CHECK(s.lambda_hat == b.lambda_hat);
    CHECK(s.d4.size() == static_cast<size_t>(s.n) + 1);

    const std::string path = "solver_samples_roundtrip.tmp";
    write_samples(path, s);
    const ProfileSamples back = read_samples(path);
    CHECK(back.N == s.N);
    CHECK(back.x0 == s.x0);
    CHECK(back.n == s.n);
    CHECK(back.lambda_hat == s.lambda_hat);
    REQUIRE(back.d4.size() == s.d4.size());
    for (size_t i = 0; i < s.d4.size(); ++i) CHECK(back.d4[i] == s.d4[i]);
    std::remove(path.c_str());
}

TEST_CASE("solver rejects dimensions outside the certified window") {
    CHECK_THROWS_AS(solve_branch(12), std::domain_error);
    CHECK_THROWS_AS(solve_branch(32), std::domain_error);
}
