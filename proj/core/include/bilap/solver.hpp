#pragma once

#include <array>
#include <vector>

#include "bilap/rational.hpp"
#include "bilap/samples.hpp"

namespace bilap {

// Floating-point stage: collocation solves that produce candidate profiles.
// Nothing here is trusted by the verification stage; the outputs are sampled
// fourth derivatives that the certified builder turns into exact objects.

struct SolveOptions {
    Rational x0 = Rational(-9);  // left endpoint of the log-radial window
    long n = 4500;               // collocation intervals
    double dt0 = 0.1;            // initial continuation step in the slope target
    double dt_floor = 1e-4;      // refuse to continue below this step
    double newton_tol = 1e-11;   // Newton residual target (max-norm)
    int max_newton = 25;
};

// Solution of the boundary-value problem for the log-radial profile
//   w'''' + c3 w''' + c2 w'' + c1 w' + K = lambda e^w
// with w(0) = 0, w'(0) = 4, w(x0) = log(K/lambda), w''(x0) = w'''(x0) = 0 and
// lambda free, discretized with Hermite-Simpson collocation and reached by
// continuation in the slope target t = w'(0) from the exact start
// (w == 0, lambda = K) at t = 0.
struct BranchState {
    int N = 0;
    Rational x0;
    long n = 0;
    double h = 0.0;                          // grid spacing, double image
    std::vector<std::array<double, 4>> y;    // (w, w', w'', w''') at the knots
    double lambda_hat = 0.0;
    double residual = 0.0;                   // final Newton residual (max-norm)
    int continuation_steps = 0;
};

BranchState solve_branch(int N, const SolveOptions& opt = {});

// Solution of the linear auxiliary problem
//   T_alpha psi - beta_bar e^w psi = f   (f == 1)
// with psi(x0) = 1, psi''(x0) = psi'''(x0) = 0, psi(0) = 0, on the same grid,
// where alpha_hat solves P_N(alpha) = beta_bar e^{w(x0)} in (0, (N-4)/2).
struct EigenState {
    double alpha_hat = 0.0;
    std::vector<std::array<double, 4>> y;    // (psi, psi', psi'', psi''')
    double residual = 0.0;
};

EigenState solve_eigen_profile(const BranchState& w, double beta_bar,
                               const SolveOptions& opt = {});

// Knot samples of the fourth derivative, recovered from the states through
// the differential equation (exact at collocation points).
ProfileSamples w_samples(const BranchState& w);
// The auxiliary samples keep the w solve's lambda_hat in the header slot.
ProfileSamples psi_samples(const BranchState& w, const EigenState& psi, double beta_bar);

}  // namespace bilap
