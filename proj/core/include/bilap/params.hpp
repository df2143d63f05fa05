#pragma once

#include "bilap/piecewise.hpp"
#include "bilap/rational.hpp"

namespace bilap {

// Certified inputs for one dimension. The invariants 0 < eps0 < lambda,
// eps > 0, beta < beta_bar, 0 < alpha < (N-4)/2 are validated on construction.
struct DimensionParams {
    int N = 0;
    Rational lambda;
    Rational eps0;
    Rational eps;
    Rational beta;
    Rational beta_bar;
    Rational alpha;
    Grid grid;
    long m = 1;  // sub-intervals per piece in the inequality checks

    void validate() const;
};

constexpr int kDimMin = 13;
constexpr int kDimMax = 31;

// Built-in per-dimension table (the coarse verification parameters), default
// grid x0 = -9 with 4500 intervals. m is the measured default subdivision.
DimensionParams coarse_params(int N);

// High-accuracy variants, defined for N = 13 and 14 (m = 1500).
DimensionParams fine_params(int N);
bool has_fine_params(int N);

}  // namespace bilap
