#include "bilap/params.hpp"

#include <stdexcept>
#include <string>

namespace bilap {

void DimensionParams::validate() const {
    if (N < kDimMin || N > kDimMax)
        throw std::domain_error("DimensionParams: N out of range [13,31]: " + std::to_string(N));
    if (!(eps0 > 0 && eps0 < lambda))
        throw std::domain_error("DimensionParams: need 0 < eps0 < lambda");
    if (!(eps > 0)) throw std::domain_error("DimensionParams: need eps > 0");
    if (!(beta > 0 && beta < beta_bar))
        throw std::domain_error("DimensionParams: need 0 < beta < beta_bar");
    if (!(alpha > 0 && 2 * alpha < N - 4))
        throw std::domain_error("DimensionParams: need 0 < alpha < (N-4)/2");
    if (m < 1) throw std::domain_error("DimensionParams: need m >= 1");
}

namespace {

struct Row {
    int N;
    const char* lambda;
    const char* eps0;
    const char* eps;
    const char* beta_bar;
    const char* beta;
    const char* alpha;
    long m;
};

// Coarse verification parameters per dimension.  The subdivision counts m are
// measured: the smallest values in the ladder {1, 2, 3, 4, 6, 8, 12, 16} for
// which every inequality check passes on the default grid (only N = 16, 17
// need m = 2 — their eps0/lambda ratio is the tightest of the table, and the
// curvature term M delta^2/2 of the last piece overwhelms the slack at m = 1).
constexpr Row kCoarse[] = {
    {13, "12193/5", "1", "1/2000000", "2550", "2500", "39/10", 1},
    {14, "14556/5", "1", "3/1000000", "3100", "3000", "17/5", 1},
    {15, "17119/5", "1", "3/1000000", "3600", "3500", "31/10", 1},
    {16, "19882/5", "1", "1/100000", "4100", "4000", "3", 2},
    {17, "22844/5", "1", "1/5000", "4800", "4600", "3", 2},
    {18, "52011/10", "2", "1/5000", "5400", "5300", "27/10", 1},
    {19, "29366/5", "2", "1/5000", "6100", "6000", "27/10", 1},
    {20, "65851/10", "3", "7/10000", "7000", "6800", "27/10", 1},
    {21, "73367/10", "3", "7/10000", "7700", "7500", "13/5", 1},
    {22, "81281/10", "4", "1/1000", "8600", "8400", "13/5", 1},
    {23, "89591/10", "4", "1/1000", "9400", "9200", "5/2", 1},
    {24, "49149/5", "4", "1/1000", "10400", "10200", "5/2", 1},
    {25, "107401/10", "4", "1/1000", "11400", "11200", "5/2", 1},
    {26, "116901/10", "6", "1/500", "12400", "12200", "5/2", 1},
    {27, "126797/10", "7", "1/500", "13400", "13200", "12/5", 1},
    {28, "13709", "7", "1/500", "14500", "14300", "12/5", 1},
    {29, "73889/5", "7", "1/500", "15400", "15200", "12/5", 1},
    {30, "79431/5", "8", "1/500", "16600", "16400", "12/5", 1},
    {31, "170343/10", "10", "1/500", "17600", "17500", "23/10", 1},
};

constexpr Row kFine[] = {
    {13, "2438589/1000", "3/1000", "1/2000000", "2550", "2510", "39/10", 1500},
    {14, "1455597/500", "3/1000", "1/2000000", "3100", "3000", "17/5", 1500},
};

DimensionParams from_row(const Row& r) {
    DimensionParams p;
    p.N = r.N;
    p.lambda = parse_rational(r.lambda);
    p.eps0 = parse_rational(r.eps0);
    p.eps = parse_rational(r.eps);
    p.beta_bar = parse_rational(r.beta_bar);
    p.beta = parse_rational(r.beta);
    p.alpha = parse_rational(r.alpha);
    p.grid = Grid::make(Rational(-9), 4500);
    p.m = r.m;
    p.validate();
    return p;
}

}  // namespace

DimensionParams coarse_params(int N) {
    for (const Row& r : kCoarse)
        if (r.N == N) return from_row(r);
    throw std::domain_error("coarse_params: no built-in table for N = " + std::to_string(N));
}

bool has_fine_params(int N) {
    for (const Row& r : kFine)
        if (r.N == N) return true;
    return false;
}

DimensionParams fine_params(int N) {
    for (const Row& r : kFine)
        if (r.N == N) return from_row(r);
    throw std::domain_error("fine_params: no built-in table for N = " + std::to_string(N));
}

}  // namespace bilap
