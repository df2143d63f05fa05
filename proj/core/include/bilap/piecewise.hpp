#pragma once

#include <string>
#include <vector>

#include "bilap/poly.hpp"
#include "bilap/rational.hpp"

namespace bilap {

struct Grid {
    Rational x0;  // < 0
    long n = 0;   // interval count
    Rational h;   // -x0/n, so knot(n) == 0 exactly

    static Grid make(const Rational& x0, long n);
    Rational knot(long j) const { return x0 + h * Rational(j); }
    bool operator==(const Grid& o) const { return x0 == o.x0 && n == o.n; }
};

// Globally C3 piecewise polynomial of degree <= 7, piece j expanded at its
// left knot, constant tail_value for s <= x0.
struct PiecewisePoly {
    Grid grid;
    std::vector<Coeffs> pieces;
    Rational tail_value;

    // exact value / derivative at any s <= 0 (tail branch for s <= x0)
    Rational eval(const Rational& s, int ell = 0) const;

    // derivative ell of piece j at local offset t in [0, h]
    Rational piece_deriv(long j, int ell, const Rational& t) const {
        return coeffs_deriv_at(pieces[j], ell, t);
    }
};

struct C3Report {
    bool ok = true;
    long junction = -1;  // knot index of the first violation
    int order = -1;      // derivative order of the first violation
};

// Exact rational identity checks: C3 gluing at every interior knot and
// tail compatibility (value tail_value, derivatives 1..3 zero) at x0.
C3Report check_c3(const PiecewisePoly& p);

// BILAP-PROFILE v1 file format (UTF-8, line oriented, bit-exact round trip):
//   BILAP-PROFILE v1
//   N <int>
//   x0 <p/q>
//   intervals <n>
//   lambda <p/q>
//   tail <p/q>
//   <n lines: a0 a1 a2 a3 a4 a5 a6 a7>
struct ProfileFile {
    int N = 0;
    Rational lambda;
    PiecewisePoly poly;
};

void write_profile(const std::string& path, const ProfileFile& pf);
ProfileFile read_profile(const std::string& path);

}  // namespace bilap
