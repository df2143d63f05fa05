// Microbenchmarks for the exact-arithmetic hot paths: degree-7 polynomial
// evaluation, the truncated exponential series, enclosure construction, and a
// full subsolution scan over a synthetic piecewise profile.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bilap/exp_enclosure.hpp"
#include "bilap/params.hpp"
#include "bilap/piecewise.hpp"
#include "bilap/poly.hpp"
#include "bilap/verifier.hpp"

namespace bm = benchmark;
using namespace bilap;

namespace {

Rational dyadic(std::mt19937_64& g, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return rationalize_dyadic(d(g), Integer(1) << 40);
}

// A profile-shaped piecewise polynomial with lattice coefficients of the same
// denominator budget the builder emits (irrelevant values, realistic cost).
PiecewisePoly synthetic_profile(long n) {
    std::mt19937_64 g{7};
    PiecewisePoly w;
    w.grid = Grid::make(Rational(-9), n);
    w.pieces.resize(n);
    for (auto& piece : w.pieces) {
        piece[0] = dyadic(g, -1.4, 0.9);
        for (int k = 1; k < 8; ++k) piece[k] = dyadic(g, -1.0, 1.0);
    }
    w.tail_value = dyadic(g, -1.4, -1.3);
    return w;
}

void BM_PolyEval(bm::State& st) {
    std::mt19937_64 g{11};
    Poly p;
    p.c.resize(8);
    for (auto& c : p.c) c = dyadic(g, -1.0, 1.0);
    const Rational x = dyadic(g, 0.0, 0.002);
    for (auto _ : st) {
        Rational v = poly_eval(p, x);
        bm::DoNotOptimize(v.get_mpq_t());
    }
}

void BM_PolySupBound(bm::State& st) {
    std::mt19937_64 g{13};
    Poly p;
    p.c.resize(8);
    for (auto& c : p.c) c = dyadic(g, -1.0, 1.0);
    const Rational h(1, 500);
    for (auto _ : st) {
        Rational v = poly_sup_bound(p, h, 1);
        bm::DoNotOptimize(v.get_mpq_t());
    }
}

void BM_TaylorExp(bm::State& st) {
    std::mt19937_64 g{17};
    const Rational x = dyadic(g, -1.2, -1.1);
    for (auto _ : st) {
        Rational v = taylor_exp(x);
        bm::DoNotOptimize(v.get_mpq_t());
    }
}

void BM_ExpEnclosure(bm::State& st) {
    std::mt19937_64 g{19};
    const Rational x = dyadic(g, -1.2, -1.1);
    for (auto _ : st) {
        ExpEnclosure e = exp_enclosure(x);
        bm::DoNotOptimize(e.lower.get_mpq_t());
    }
}

void BM_SubsolutionScan(bm::State& st) {
    const long n = st.range(0);
    const PiecewisePoly w = synthetic_profile(n);
    DimensionParams p = coarse_params(13);
    p.grid = w.grid;
    p.m = 1;
    for (auto _ : st) {
        CheckResult r = check_subsolution(w, p);
        bm::DoNotOptimize(r.worst_margin.get_mpq_t());
    }
    st.SetItemsProcessed(st.iterations() * n);
}

}  // namespace

BENCHMARK(BM_PolyEval);
BENCHMARK(BM_PolySupBound);
BENCHMARK(BM_TaylorExp);
BENCHMARK(BM_ExpEnclosure);
BENCHMARK(BM_SubsolutionScan)->Arg(150)->Arg(600)->Unit(bm::kMillisecond);

BENCHMARK_MAIN();
