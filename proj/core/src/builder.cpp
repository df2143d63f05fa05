#include "bilap/builder.hpp"

#include <cmath>
#include <stdexcept>

#include "bilap/operator_l.hpp"
#include "bilap/spline.hpp"

namespace bilap {

PiecewisePoly integrate_fourth_derivative(const Grid& grid,
                                          const std::vector<std::array<Rational, 4>>& d4,
                                          const std::array<Rational, 4>& seeds,
                                          const Rational& tail_value) {
    const long n = grid.n;
    if (static_cast<long>(d4.size()) != n)
        throw std::invalid_argument("integrate_fourth_derivative: need one cubic per interval");

    PiecewisePoly out;
    out.grid = grid;
    out.tail_value = tail_value;
    out.pieces.resize(n);

    Coeffs cur{};
    for (int l = 0; l < 4; ++l) cur[l] = seeds[l];
    for (long j = 0; j < n; ++j) {
        // p'''' = c0 + c1 t + c2 t^2 + c3 t^3  fixes the orders 4..7.
        cur[4] = d4[j][0] / 24;
        cur[5] = d4[j][1] / 120;
        cur[6] = d4[j][2] / 360;
        cur[7] = d4[j][3] / 840;
        out.pieces[j] = cur;
        if (j + 1 < n) {
            Coeffs next{};
            for (int l = 0; l < 4; ++l)
                next[l] = coeffs_deriv_at(out.pieces[j], l, grid.h) / Rational(factorial(l));
            cur = next;
        }
    }
    return out;
}

namespace {

std::vector<std::array<Rational, 4>> rationalized_spline(const ProfileSamples& s,
                                                         const Grid& grid, const Integer& cap) {
    if (static_cast<long>(s.d4.size()) != s.n + 1)
        throw std::invalid_argument("builder: samples must hold n+1 knot values");
    const auto cubics = spline_cubic_coeffs(s.d4, to_double(grid.h));
    std::vector<std::array<Rational, 4>> g(cubics.size());
    for (size_t j = 0; j < cubics.size(); ++j)
        for (int i = 0; i < 4; ++i) g[j][i] = rationalize_dyadic(cubics[j][i], cap);
    return g;
}

Grid grid_of(const ProfileSamples& s) {
    return Grid::make(rational_from_double(s.x0), s.n);
}

}  // namespace

ProfileFile build_w(const ProfileSamples& s, const Rational& lambda, const BuildOptions& opt) {
    if (!(lambda > 0)) throw std::invalid_argument("build_w: need lambda > 0");
    const Grid grid = grid_of(s);
    auto g = rationalized_spline(s, grid, opt.cap);

    const Rational K(k_constant(s.N));
    const Rational tail =
        rationalize_dyadic(std::log(to_double(K / lambda)), opt.cap);

    const std::array<Rational, 4> seeds{tail, Rational(0), Rational(0), Rational(0)};
    PiecewisePoly w = integrate_fourth_derivative(grid, g, seeds, tail);

    if (opt.terminal_correction) {
        const Rational d0 = w.eval(Rational(0), 0);
        const Rational d1 = w.eval(Rational(0), 1) - 4;
        if (d0 != 0 || d1 != 0) {
            // Solve corr(0) = -d0, corr'(0) = -d1 for the quartic/quintic
            // correction; X = -x0 > 0, determinant X^8/2880.
            const Rational X = -grid.x0;
            const Rational X4 = pow_int(X, 4);
            const Rational mu0 = (Rational(-120) * d0 + Rational(24) * d1 * X) / X4;
            const Rational mu1 = (Rational(480) * d0 - Rational(120) * d1 * X) / (X4 * X);
            for (long j = 0; j < grid.n; ++j) {
                g[j][0] += mu0 + mu1 * (grid.h * Rational(j));
                g[j][1] += mu1;
            }
            w = integrate_fourth_derivative(grid, g, seeds, tail);
        }
    }

    ProfileFile pf;
    pf.N = s.N;
    pf.lambda = lambda;
    pf.poly = std::move(w);
    return pf;
}

ProfileFile build_psi(const ProfileSamples& s, const Rational& lambda, const BuildOptions& opt) {
    const Grid grid = grid_of(s);
    const auto g = rationalized_spline(s, grid, opt.cap);

    const std::array<Rational, 4> seeds{Rational(0), Rational(0), Rational(0), Rational(0)};
    PiecewisePoly psi = integrate_fourth_derivative(grid, g, seeds, Rational(0));

    // Constant shift: psi(0) = 0 becomes an exact identity, and the shifted
    // left endpoint value -v is the constant tail.
    const Rational v = psi.eval(Rational(0), 0);
    for (auto& piece : psi.pieces) piece[0] -= v;
    psi.tail_value = -v;

    ProfileFile pf;
    pf.N = s.N;
    pf.lambda = lambda;
    pf.poly = std::move(psi);
    return pf;
}

}  // namespace bilap
