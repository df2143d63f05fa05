#pragma once

// Shared fixtures and deterministic random helpers for the test binaries.

#include <cstdint>
#include <random>

#include "bilap/builder.hpp"
#include "bilap/params.hpp"
#include "bilap/rational.hpp"
#include "bilap/solver.hpp"

namespace testsupport {

// One full coarse pipeline for a dimension, solved once per test process.
struct Pipeline {
    bilap::DimensionParams params;
    bilap::BranchState branch;
    bilap::EigenState eigen;
    bilap::ProfileSamples w_samp;
    bilap::ProfileSamples psi_samp;
    bilap::ProfileFile w;
    bilap::ProfileFile psi;
};

inline Pipeline run_pipeline(int N) {
    Pipeline r;
    r.params = bilap::coarse_params(N);
    bilap::SolveOptions so;
    r.branch = bilap::solve_branch(N, so);
    r.eigen = bilap::solve_eigen_profile(r.branch, bilap::to_double(r.params.beta_bar), so);
    r.w_samp = bilap::w_samples(r.branch);
    r.psi_samp = bilap::psi_samples(r.branch, r.eigen, bilap::to_double(r.params.beta_bar));
    r.w = bilap::build_w(r.w_samp, r.params.lambda);
    r.psi = bilap::build_psi(r.psi_samp, r.params.lambda);
    return r;
}

inline const Pipeline& pipeline13() {
    static const Pipeline p = run_pipeline(13);
    return p;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

// Deterministic random rational near uniform on [lo, hi] (dyadic lattice).
inline bilap::Rational rand_rational(std::mt19937_64& g, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return bilap::rationalize_dyadic(d(g), bilap::Integer(1) << 33);
}

inline bilap::Rational rat_abs(const bilap::Rational& x) {
    return x < 0 ? bilap::Rational(-x) : x;
}

}  // namespace testsupport
