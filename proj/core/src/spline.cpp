#include "bilap/spline.hpp"

#include <stdexcept>

namespace bilap {

namespace {

// Solve the symmetric tridiagonal system with diagonal 4, off-diagonals 1,
// right-hand side rhs (overwritten with the solution).
void solve_tridiag_141(std::vector<double>& rhs) {
    const std::size_t k = rhs.size();
    if (k == 0) return;
    std::vector<double> diag(k, 4.0);
    for (std::size_t i = 1; i < k; ++i) {
        const double w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[k - 1] /= diag[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) rhs[i] = (rhs[i] - rhs[i + 1]) / diag[i];
}

}  // namespace

std::vector<std::array<double, 4>> spline_cubic_coeffs(const std::vector<double>& v, double h) {
    if (v.size() < 2) throw std::invalid_argument("spline_cubic_coeffs: need at least 2 values");
    if (!(h > 0)) throw std::invalid_argument("spline_cubic_coeffs: need h > 0");
    const std::size_t n = v.size() - 1;  // number of intervals

    // Second derivatives M[0..n] at the knots.
    std::vector<double> M(n + 1, 0.0);
    auto d = [&](std::size_t j) { return (v[j - 1] - 2.0 * v[j] + v[j + 1]) / (h * h); };

    if (n == 1) {
        // Two points: linear (natural).  M stays zero.
    } else if (n == 2) {
        // Three points: natural conditions, single interior equation.
        M[1] = 1.5 * d(1);
    } else {
        // Not-a-knot.  Substituting M0 = 2*M1 - M2 into the first interior
        // continuity equation collapses it to M1 = d(1); symmetrically
        // M_{n-1} = d(n-1).  The remaining unknowns M2..M_{n-2} satisfy a
        // (4,1)-tridiagonal system.
        M[1] = d(1);
        M[n - 1] = d(n - 1);
        if (n >= 4) {
            std::vector<double> rhs(n - 3);
            for (std::size_t j = 2; j <= n - 2; ++j) rhs[j - 2] = 6.0 * d(j);
            rhs.front() -= M[1];
            rhs.back() -= M[n - 1];
            solve_tridiag_141(rhs);
            for (std::size_t j = 2; j <= n - 2; ++j) M[j] = rhs[j - 2];
        }
        M[0] = 2.0 * M[1] - M[2];
        M[n] = 2.0 * M[n - 1] - M[n - 2];
    }

    std::vector<std::array<double, 4>> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double b = (v[j + 1] - v[j]) / h - h * (2.0 * M[j] + M[j + 1]) / 6.0;
        out[j] = {v[j], b, M[j] / 2.0, (M[j + 1] - M[j]) / (6.0 * h)};
    }
    return out;
}

}  // namespace bilap
