#include "bilap/piecewise.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bilap {

Grid Grid::make(const Rational& x0, long n) {
    if (x0 >= 0) throw std::invalid_argument("Grid: x0 must be negative");
    if (n <= 0) throw std::invalid_argument("Grid: n must be positive");
    Grid g;
    g.x0 = x0;
    g.n = n;
    g.h = -x0 / Rational(n);
    return g;
}

Rational PiecewisePoly::eval(const Rational& s, int ell) const {
    if (s > 0) throw std::invalid_argument("PiecewisePoly::eval: s > 0");
    if (s <= grid.x0) {
        if (s == grid.x0) return piece_deriv(0, ell, 0);
        return ell == 0 ? tail_value : Rational(0);
    }
    // piece index floor((s - x0)/h), s == 0 lands on the last piece at t == h
    Rational q = (s - grid.x0) / grid.h;
    Integer jz;
    mpz_fdiv_q(jz.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    long j = static_cast<long>(jz.get_si());
    if (j >= grid.n) j = grid.n - 1;
    Rational t = s - grid.knot(j);
    return piece_deriv(j, ell, t);
}

C3Report check_c3(const PiecewisePoly& p) {
    C3Report r;
    const long n = p.grid.n;
    // tail compatibility at x0
    if (p.pieces.empty()) return r;
    if (p.pieces[0][0] != p.tail_value) return {false, 0, 0};
    for (int l = 1; l <= 3; ++l)
        if (p.pieces[0][l] != 0) return {false, 0, l};
    // junction j between pieces j-1 and j
    for (long j = 1; j < n; ++j) {
        for (int l = 0; l <= 3; ++l) {
            Rational left = coeffs_deriv_at(p.pieces[j - 1], l, p.grid.h);
            Rational right = p.pieces[j][l] * Rational(factorial(l));
            if (left != right) return {false, j, l};
        }
    }
    return r;
}

void write_profile(const std::string& path, const ProfileFile& pf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_profile: cannot open " + path);
    out << "BILAP-PROFILE v1\n";
    out << "N " << pf.N << "\n";
    out << "x0 " << to_string(pf.poly.grid.x0) << "\n";
    out << "intervals " << pf.poly.grid.n << "\n";
    out << "lambda " << to_string(pf.lambda) << "\n";
    out << "tail " << to_string(pf.poly.tail_value) << "\n";
    for (const Coeffs& a : pf.poly.pieces) {
        for (int i = 0; i < 8; ++i) out << (i ? " " : "") << to_string(a[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_profile: write failed for " + path);
}

namespace {

std::string expect_key(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("profile: truncated header");
    if (line.rfind(key + " ", 0) != 0)
        throw std::runtime_error("profile: expected '" + key + "', got '" + line + "'");
    return line.substr(key.size() + 1);
}

}  // namespace

ProfileFile read_profile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_profile: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "BILAP-PROFILE v1")
        throw std::runtime_error("read_profile: bad magic in " + path);
    ProfileFile pf;
    pf.N = std::stoi(expect_key(in, "N"));
    Rational x0 = parse_rational(expect_key(in, "x0"));
    long n = std::stol(expect_key(in, "intervals"));
    pf.lambda = parse_rational(expect_key(in, "lambda"));
    pf.poly.tail_value = parse_rational(expect_key(in, "tail"));
    pf.poly.grid = Grid::make(x0, n);
    pf.poly.pieces.resize(n);
    for (long j = 0; j < n; ++j) {
        if (!std::getline(in, line)) throw std::runtime_error("read_profile: truncated pieces");
        std::istringstream ls(line);
        std::string tok;
        for (int i = 0; i < 8; ++i) {
            if (!(ls >> tok)) throw std::runtime_error("read_profile: short piece line");
            pf.poly.pieces[j][i] = parse_rational(tok);
        }
        if (ls >> tok) throw std::runtime_error("read_profile: trailing tokens on piece line");
    }
    return pf;
}

}  // namespace bilap
