#include "bilap/samples.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace bilap {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string take(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("samples: truncated header");
    if (line.rfind(key + " ", 0) != 0)
        throw std::runtime_error("samples: expected '" + key + "', got '" + line + "'");
    return line.substr(key.size() + 1);
}

}  // namespace

void write_samples(const std::string& path, const ProfileSamples& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_samples: cannot open " + path);
    out << "N " << s.N << "\n";
    out << "x0 " << fmt17(s.x0) << "\n";
    out << "intervals " << s.n << "\n";
    out << "lambda_hat " << fmt17(s.lambda_hat) << "\n";
    for (double v : s.d4) out << fmt17(v) << "\n";
    if (!out) throw std::runtime_error("write_samples: write failed for " + path);
}

ProfileSamples read_samples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_samples: cannot open " + path);
    ProfileSamples s;
    s.N = std::stoi(take(in, "N"));
    s.x0 = std::stod(take(in, "x0"));
    s.n = std::stol(take(in, "intervals"));
    s.lambda_hat = std::stod(take(in, "lambda_hat"));
    s.d4.resize(s.n + 1);
    std::string line;
    for (long j = 0; j <= s.n; ++j) {
        if (!std::getline(in, line)) throw std::runtime_error("read_samples: truncated data");
        s.d4[j] = std::stod(line);
    }
    return s;
}

}  // namespace bilap
