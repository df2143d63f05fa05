// bilapcert: certified two-sided enclosures of the extremal parameter of the
// radial bilaplacian Gelfand problem on the unit ball, 13 <= N <= 31.
//
// Pipeline per dimension: solve (floating collocation) -> build (exact
// rational piecewise profiles) -> verify (exact inequality chain) ->
// certify (enclosure + digest-stamped certificate file).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bilap/bounds.hpp"
#include "bilap/builder.hpp"
#include "bilap/certificate.hpp"
#include "bilap/exp_enclosure.hpp"
#include "bilap/operator_l.hpp"
#include "bilap/params.hpp"
#include "bilap/piecewise.hpp"
#include "bilap/samples.hpp"
#include "bilap/solver.hpp"
#include "bilap/verifier.hpp"

namespace fs = std::filesystem;
using namespace bilap;

namespace {

struct RunConfig {
    std::string dims_spec;  // empty -> per-command default
    double x0 = -9.0;
    bool x0_set = false;
    long intervals = 4500;
    bool intervals_set = false;
    long subdiv = 0;  // 0 -> table default
    std::string cap_spec;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string out = "out";
    bool fine = false;
    std::vector<std::string> cert_paths;  // report only
    std::string report_out;               // report only; empty -> no CSV
};

// "13", "13..31", "5,7,13..15" -> sorted unique list inside [lo, hi].
std::vector<int> parse_dims(const std::string& spec_in, int lo, int hi,
                            const char* fallback = "13..31") {
    const std::string spec = spec_in.empty() ? std::string(fallback) : spec_in;
    std::set<int> dims;
    size_t pos = 0;
    auto parse_int = [&](const std::string& tok) {
        size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad dimension token: " + tok);
        return v;
    };
    while (pos <= spec.size()) {
        size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        if (tok.empty()) throw std::invalid_argument("empty dimension token");
        const size_t dots = tok.find("..");
        int a, b;
        if (dots == std::string::npos) {
            a = b = parse_int(tok);
        } else {
            a = parse_int(tok.substr(0, dots));
            b = parse_int(tok.substr(dots + 2));
        }
        if (a > b) throw std::invalid_argument("reversed dimension range: " + tok);
        for (int d = a; d <= b; ++d) {
            if (d < lo || d > hi)
                throw std::invalid_argument("dimension " + std::to_string(d) +
                                            " outside supported range " + std::to_string(lo) +
                                            ".." + std::to_string(hi));
            dims.insert(d);
        }
        pos = comma + 1;
    }
    return {dims.begin(), dims.end()};
}

DimensionParams params_for(int N, const RunConfig& cfg) {
    DimensionParams p;
    if (cfg.fine) {
        if (!has_fine_params(N))
            throw std::invalid_argument("no fine parameter row for N = " + std::to_string(N) +
                                        " (available: 13, 14)");
        p = fine_params(N);
    } else {
        p = coarse_params(N);
    }
    if (cfg.x0_set || cfg.intervals_set)
        p.grid = Grid::make(rational_from_double(cfg.x0), cfg.intervals);
    if (cfg.subdiv > 0) p.m = cfg.subdiv;
    p.validate();
    return p;
}

BuildOptions build_options(const RunConfig& cfg) {
    BuildOptions b;
    if (!cfg.cap_spec.empty()) {
        b.cap = Integer(cfg.cap_spec);
        if (b.cap < 2) throw std::invalid_argument("--cap must be at least 2");
    }
    return b;
}

struct Paths {
    fs::path samples_w, samples_psi, profile_w, profile_psi, cert;
};

Paths paths_for(int N, const RunConfig& cfg) {
    const std::string suffix = cfg.fine ? "_fine" : "";
    const fs::path dir(cfg.out);
    Paths p;
    p.samples_w = dir / ("w_N" + std::to_string(N) + ".samples");
    p.samples_psi = dir / ("psi_N" + std::to_string(N) + ".samples");
    p.profile_w = dir / ("profile_w_N" + std::to_string(N) + suffix + ".txt");
    p.profile_psi = dir / ("profile_psi_N" + std::to_string(N) + suffix + ".txt");
    p.cert = dir / ("cert_N" + std::to_string(N) + suffix + ".txt");
    return p;
}

SolveOptions solve_options(const DimensionParams& p) {
    SolveOptions so;
    so.x0 = p.grid.x0;
    so.n = p.grid.n;
    return so;
}

bool samples_match(const ProfileSamples& s, int N, const DimensionParams& p) {
    return s.N == N && s.n == p.grid.n && s.x0 == to_double(p.grid.x0) &&
           static_cast<long>(s.d4.size()) == s.n + 1;
}

void run_solve(int N, const DimensionParams& p, const Paths& paths) {
    const SolveOptions so = solve_options(p);
    std::printf("[N=%d] solving profile branch (continuation to slope 4)...\n", N);
    std::fflush(stdout);
    const BranchState bs = solve_branch(N, so);
    std::printf("[N=%d] lambda_hat = %.6f  (residual %.2e, %d continuation steps)\n", N,
                bs.lambda_hat, bs.residual, bs.continuation_steps);
    const EigenState es = solve_eigen_profile(bs, to_double(p.beta_bar), so);
    std::printf("[N=%d] alpha_hat  = %.6f  (auxiliary residual %.2e)\n", N, es.alpha_hat,
                es.residual);
    write_samples(paths.samples_w.string(), w_samples(bs));
    write_samples(paths.samples_psi.string(), psi_samples(bs, es, to_double(p.beta_bar)));
    std::printf("[N=%d] wrote %s, %s\n", N, paths.samples_w.string().c_str(),
                paths.samples_psi.string().c_str());
}

// Loads samples, re-solving when absent or inconsistent with the grid.
std::pair<ProfileSamples, ProfileSamples> ensure_samples(int N, const DimensionParams& p,
                                                         const Paths& paths) {
    if (fs::exists(paths.samples_w) && fs::exists(paths.samples_psi)) {
        ProfileSamples sw = read_samples(paths.samples_w.string());
        ProfileSamples sp = read_samples(paths.samples_psi.string());
        if (samples_match(sw, N, p) && samples_match(sp, N, p)) return {sw, sp};
        std::printf("[N=%d] samples on disk do not match the requested grid; re-solving\n", N);
    }
    run_solve(N, p, paths);
    return {read_samples(paths.samples_w.string()), read_samples(paths.samples_psi.string())};
}

void build_and_write_profiles(int N, const DimensionParams& p, const RunConfig& cfg,
                              const Paths& paths, const ProfileSamples& sw,
                              const ProfileSamples& sp) {
    const BuildOptions bopt = build_options(cfg);
    ProfileFile w = build_w(sw, p.lambda, bopt);
    ProfileFile psi = build_psi(sp, p.lambda, bopt);
    for (const auto* pf : {&w, &psi}) {
        const C3Report rep = check_c3(pf->poly);
        if (!rep.ok)
            throw std::runtime_error("built profile is not C3 at junction " +
                                     std::to_string(rep.junction) + " order " +
                                     std::to_string(rep.order));
    }
    write_profile(paths.profile_w.string(), w);
    write_profile(paths.profile_psi.string(), psi);
    std::printf("[N=%d] wrote %s, %s\n", N, paths.profile_w.string().c_str(),
                paths.profile_psi.string().c_str());
}

std::pair<ProfileFile, ProfileFile> ensure_profiles(int N, const DimensionParams& p,
                                                    const RunConfig& cfg, const Paths& paths) {
    if (!(fs::exists(paths.profile_w) && fs::exists(paths.profile_psi))) {
        const auto [sw, sp] = ensure_samples(N, p, paths);
        build_and_write_profiles(N, p, cfg, paths, sw, sp);
    }
    ProfileFile w = read_profile(paths.profile_w.string());
    ProfileFile psi = read_profile(paths.profile_psi.string());
    for (const auto* pf : {&w, &psi}) {
        if (pf->N != N || !(pf->poly.grid == p.grid))
            throw std::runtime_error("profile on disk does not match requested N/grid");
        const C3Report rep = check_c3(pf->poly);
        if (!rep.ok)
            throw std::runtime_error("profile file fails the C3 identity check (junction " +
                                     std::to_string(rep.junction) + ", order " +
                                     std::to_string(rep.order) + ")");
    }
    if (w.lambda != p.lambda)
        throw std::runtime_error("profile on disk was built for a different lambda; "
                                 "remove it or rerun build");
    return {std::move(w), std::move(psi)};
}

void print_report_line(int N, const CheckResult& c) {
    std::printf("[N=%d] %-14s %-7s margin %-13.6g at s = %.6g\n", N, c.name.c_str(),
                to_string(c.status), to_double(c.worst_margin), to_double(c.worst_location));
}

VerifyReport run_verify(int N, const DimensionParams& p, const RunConfig& cfg,
                        const PiecewisePoly& w, const PiecewisePoly& psi) {
    VerifyOptions vo;
    vo.jobs = cfg.jobs;
    vo.m = p.m;
    std::printf("[N=%d] verifying 9-check chain (m = %ld, jobs = %d)...\n", N, p.m, cfg.jobs);
    std::fflush(stdout);
    const VerifyReport rep = verify_all(w, psi, p, vo);
    for (const CheckResult& c : rep.checks) print_report_line(N, c);
    return rep;
}

std::string iso_now() {
    char buf[32];
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool params_equal(const DimensionParams& a, const DimensionParams& b) {
    return a.N == b.N && a.lambda == b.lambda && a.eps0 == b.eps0 && a.eps == b.eps &&
           a.beta == b.beta && a.beta_bar == b.beta_bar && a.alpha == b.alpha &&
           a.grid == b.grid && a.m == b.m;
}

// Returns true iff the dimension ended up certified.
bool run_certify(int N, const RunConfig& cfg) {
    const DimensionParams p = params_for(N, cfg);
    const Paths paths = paths_for(N, cfg);
    const BuildOptions bopt = build_options(cfg);

    if (fs::exists(paths.cert)) {
        try {
            const Certificate old = read_certificate(paths.cert.string());
            if (params_equal(old.params, p) && old.cap == bopt.cap &&
                fs::exists(paths.profile_w) && fs::exists(paths.profile_psi) &&
                old.w_digest == sha256_file(paths.profile_w.string()) &&
                old.psi_digest == sha256_file(paths.profile_psi.string())) {
                std::printf("[N=%d] certificate up to date (digest match), skipping: %s\n", N,
                            paths.cert.string().c_str());
                return old.certified;
            }
            std::printf("[N=%d] existing certificate is stale, recomputing\n", N);
        } catch (const std::exception& e) {
            std::printf("[N=%d] existing certificate rejected (%s), recomputing\n", N, e.what());
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto [w, psi] = ensure_profiles(N, p, cfg, paths);
    const VerifyReport rep = run_verify(N, p, cfg, w.poly, psi.poly);
    const Enclosure enc = lambda_star_enclosure(rep, p);

    Certificate cert;
    cert.params = p;
    cert.cap = bopt.cap;
    cert.w_digest = sha256_file(paths.profile_w.string());
    cert.psi_digest = sha256_file(paths.profile_psi.string());
    cert.checks = rep.checks;
    cert.certified = enc.certified;
    cert.reason = enc.reason;
    cert.lower = enc.lower;
    cert.upper = enc.upper;

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char secs_buf[32];
    std::snprintf(secs_buf, sizeof secs_buf, "%.3f", secs);
    write_certificate(paths.cert.string(), cert,
                      {{"created", iso_now()},
                       {"workers", std::to_string(cfg.jobs)},
                       {"wall_clock_seconds", secs_buf}});
    if (enc.certified)
        std::printf("[N=%d] certified: lambda* in [%.6f, %.6f]  -> %s\n", N,
                    to_double(enc.lower), to_double(enc.upper), paths.cert.string().c_str());
    else
        std::printf("[N=%d] REFUSED: %s  -> %s\n", N, enc.reason.c_str(),
                    paths.cert.string().c_str());
    return enc.certified;
}

int cmd_solve(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    int failures = 0;
    for (int N : parse_dims(cfg.dims_spec, kDimMin, kDimMax)) {
        try {
            const DimensionParams p = params_for(N, cfg);
            run_solve(N, p, paths_for(N, cfg));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "[N=%d] solve failed: %s\n", N, e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_build(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    int failures = 0;
    for (int N : parse_dims(cfg.dims_spec, kDimMin, kDimMax)) {
        try {
            const DimensionParams p = params_for(N, cfg);
            const Paths paths = paths_for(N, cfg);
            if (!(fs::exists(paths.samples_w) && fs::exists(paths.samples_psi)))
                throw std::runtime_error("missing samples files (run solve first)");
            ProfileSamples sw = read_samples(paths.samples_w.string());
            ProfileSamples sp = read_samples(paths.samples_psi.string());
            if (!samples_match(sw, N, p) || !samples_match(sp, N, p))
                throw std::runtime_error("samples files do not match the requested grid");
            build_and_write_profiles(N, p, cfg, paths, sw, sp);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "[N=%d] build failed: %s\n", N, e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
    int failures = 0;
    for (int N : parse_dims(cfg.dims_spec, kDimMin, kDimMax)) {
        try {
            const DimensionParams p = params_for(N, cfg);
            const Paths paths = paths_for(N, cfg);
            if (!(fs::exists(paths.profile_w) && fs::exists(paths.profile_psi)))
                throw std::runtime_error("missing profile files (run build first)");
            const auto [w, psi] = ensure_profiles(N, p, cfg, paths);
            const VerifyReport rep = run_verify(N, p, cfg, w.poly, psi.poly);
            if (!rep.all_passed) ++failures;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "[N=%d] verify failed: %s\n", N, e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_certify(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    int not_certified = 0;
    for (int N : parse_dims(cfg.dims_spec, kDimMin, kDimMax)) {
        try {
            if (!run_certify(N, cfg)) ++not_certified;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "[N=%d] certification error: %s\n", N, e.what());
            ++not_certified;
        }
    }
    return not_certified == 0 ? 0 : 1;
}

int cmd_gates(const RunConfig& cfg) {
    std::printf("%6s  %14s  %18s  %-12s %-12s\n", "N", "8(N-2)(N-4)", "N^2(N-4)^2/16",
                "smooth_dim", "explicit_sub");
    for (int N : parse_dims(cfg.dims_spec, 5, 1000000, "5..40")) {
        const Rational rhs = Rational(Integer(1L * N * N) * Integer(1L * (N - 4) * (N - 4)), 16);
        std::printf("%6d  %14ld  %18.4f  %-12s %-12s\n", N, k_constant(N), to_double(rhs),
                    to_string(gate_smooth_dim(N)), to_string(gate_explicit_subsolution(N)));
    }
    return 0;
}

int cmd_bounds(const RunConfig& cfg) {
    int failures = 0;
    for (int N : parse_dims(cfg.dims_spec, kDimMin, kDimMax)) {
        try {
            const DimensionParams p = params_for(N, cfg);
            const Rational b0 = beta0(p.lambda, p.eps0, p.eps);
            std::printf("[N=%d] beta0 = %.6f  window [beta0, beta_bar] = [%.4f, %.4f]  "
                        "beta = %.4f  %s\n",
                        N, to_double(b0), to_double(b0), to_double(p.beta_bar),
                        to_double(p.beta), b0 <= p.beta ? "(ordering ok)" : "(ORDERING FAILS)");
            if (!(b0 <= p.beta)) ++failures;
            std::printf("[N=%d] conditional enclosure (valid only with a passing "
                        "certificate): [%.6f, %.6f]\n",
                        N, to_double((p.lambda - p.eps0) * exp_enclosure(-2 * p.eps).lower),
                        to_double((p.lambda + p.eps0) * exp_enclosure(2 * p.eps).upper));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "[N=%d] bounds failed: %s\n", N, e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_report(const RunConfig& cfg) {
    std::printf("%4s  %10s  %8s  %10s  %8s  %8s  %6s  %-30s %s\n", "N", "lambda", "eps0", "eps",
                "beta_bar", "beta", "alpha", "enclosure", "status");
    int failures = 0;
    for (const std::string& path : cfg.cert_paths) {
        try {
            const Certificate c = read_certificate(path);
            char enc[64];
            if (c.certified)
                std::snprintf(enc, sizeof enc, "[%.4f, %.4f]", to_double(c.lower),
                              to_double(c.upper));
            else
                std::snprintf(enc, sizeof enc, "-");
            std::printf("%4d  %10.4f  %8.4g  %10.4g  %8.4g  %8.4g  %6.4g  %-30s %s\n",
                        c.params.N, to_double(c.params.lambda), to_double(c.params.eps0),
                        to_double(c.params.eps), to_double(c.params.beta_bar),
                        to_double(c.params.beta), to_double(c.params.alpha), enc,
                        c.certified ? "certified" : ("refused: " + c.reason).c_str());
            if (!cfg.report_out.empty() && c.certified) {
                // Uncertified diagnostic samples of u(r) next to the certificate.
                const fs::path cert_path(path);
                std::string stem = cert_path.filename().string();
                const std::string prefix = "cert_";
                if (stem.rfind(prefix, 0) == 0) {
                    const std::string tag =
                        stem.substr(prefix.size(), stem.size() - prefix.size() - 4);
                    const fs::path wprof =
                        cert_path.parent_path() / ("profile_w_" + tag + ".txt");
                    if (fs::exists(wprof)) {
                        const ProfileFile w = read_profile(wprof.string());
                        fs::create_directories(cfg.report_out);
                        const fs::path csv = fs::path(cfg.report_out) / ("u_" + tag + ".csv");
                        std::ofstream os(csv);
                        os << "r,u\n";
                        const int samples = 256;
                        for (int i = 0; i <= samples; ++i) {
                            const double r = std::exp(-12.0 * (1.0 - double(i) / samples));
                            char row[64];
                            std::snprintf(row, sizeof row, "%.12g,%.12g\n", r,
                                          reconstruct_u(w.poly, r));
                            os << row;
                        }
                        std::printf("  wrote %s\n", csv.string().c_str());
                    }
                }
            }
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified enclosures for the extremal parameter of the radial "
                 "bilaplacian Gelfand problem (13 <= N <= 31)"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--dims", cfg.dims_spec,
                        "dimensions, e.g. 13, 13..31, or 13,15,20 (default 13..31; "
                        "gates default 5..40)");
        sub->add_option("--x0", cfg.x0, "left endpoint of the log-radial window")
            ->each([&](const std::string&) { cfg.x0_set = true; });
        sub->add_option("--intervals", cfg.intervals, "collocation/profile intervals")
            ->each([&](const std::string&) { cfg.intervals_set = true; });
        sub->add_option("--subdiv", cfg.subdiv,
                        "verification subintervals per piece (0 = table default)");
        sub->add_option("--cap", cfg.cap_spec,
                        "rationalization cap (dyadic lattice bound), integer");
        sub->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
        sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
        sub->add_flag("--fine", cfg.fine, "high-accuracy parameter preset (N = 13, 14 only; "
                                          "m = 1500 is long-running)");
    };

    CLI::App* solve = app.add_subcommand("solve", "numerically follow the solution branch and "
                                                  "write fourth-derivative samples");
    CLI::App* build = app.add_subcommand("build", "turn samples into exact C3 rational "
                                                  "profiles");
    CLI::App* verify = app.add_subcommand("verify", "run the exact 9-check inequality chain "
                                                    "on built profiles");
    CLI::App* certify = app.add_subcommand("certify", "full pipeline ending in a "
                                                      "digest-stamped certificate");
    CLI::App* gates = app.add_subcommand("gates", "closed-form dimension gates table");
    CLI::App* bounds = app.add_subcommand("bounds", "beta0 and the parametric enclosure "
                                                    "formulas per dimension");
    CLI::App* report = app.add_subcommand("report", "summary table from certificate files");
    add_common(solve);
    add_common(build);
    add_common(verify);
    add_common(certify);
    add_common(gates);
    add_common(bounds);
    report->add_option("certs", cfg.cert_paths, "certificate files");
    report->add_option("--out", cfg.report_out,
                       "also write uncertified (r, u(r)) CSV samples to this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(cfg);
        if (build->parsed()) return cmd_build(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (certify->parsed()) return cmd_certify(cfg);
        if (gates->parsed()) return cmd_gates(cfg);
        if (bounds->parsed()) return cmd_bounds(cfg);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
