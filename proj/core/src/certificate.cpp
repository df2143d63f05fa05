#include "bilap/certificate.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bilap {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 digest failed");
    static const char hexd[] = "0123456789abcdef";
    std::string out(2 * len, '0');
    for (unsigned i = 0; i < len; ++i) {
        out[2 * i] = hexd[md[i] >> 4];
        out[2 * i + 1] = hexd[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return sha256_hex(body.str());
}

std::string certificate_payload(const Certificate& c) {
    std::ostringstream out;
    out << "BILAP-CERT v1\n";
    out << "N " << c.params.N << "\n";
    out << "x0 " << to_string(c.params.grid.x0) << "\n";
    out << "intervals " << c.params.grid.n << "\n";
    out << "m " << c.params.m << "\n";
    out << "lambda " << to_string(c.params.lambda) << "\n";
    out << "eps0 " << to_string(c.params.eps0) << "\n";
    out << "eps " << to_string(c.params.eps) << "\n";
    out << "beta " << to_string(c.params.beta) << "\n";
    out << "beta_bar " << to_string(c.params.beta_bar) << "\n";
    out << "alpha " << to_string(c.params.alpha) << "\n";
    out << "cap " << c.cap.get_str() << "\n";
    out << "profile_w sha256 " << c.w_digest << "\n";
    out << "profile_psi sha256 " << c.psi_digest << "\n";
    for (const CheckResult& ck : c.checks)
        out << "check " << ck.name << " " << to_string(ck.status) << " margin "
            << to_string(ck.worst_margin) << " at " << to_string(ck.worst_location) << "\n";
    if (c.certified) {
        out << "result certified\n";
        out << "enclosure_lower " << to_string(c.lower) << "\n";
        out << "enclosure_upper " << to_string(c.upper) << "\n";
    } else {
        out << "result refused " << c.reason << "\n";
    }
    return out.str();
}

void write_certificate(const std::string& path, Certificate& c,
                       const std::vector<std::pair<std::string, std::string>>& meta) {
    const std::string payload = certificate_payload(c);
    c.digest = sha256_hex(payload);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << payload;
    out << "digest sha256 " << c.digest << "\n";
    for (const auto& [k, v] : meta) out << "meta " << k << " " << v << "\n";
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

namespace {

std::runtime_error bad(const std::string& path, const std::string& why) {
    return std::runtime_error(path + ": " + why);
}

}  // namespace

Certificate read_certificate(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw bad(path, "cannot open");
    std::ostringstream body;
    body << in.rdbuf();
    const std::string text = body.str();

    // Split at the digest line; everything before it is the hashed payload.
    const std::string marker = "digest sha256 ";
    size_t pos = 0, digest_at = std::string::npos;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        if (text.compare(pos, marker.size(), marker) == 0) {
            digest_at = pos;
            break;
        }
        pos = eol + 1;
    }
    if (digest_at == std::string::npos) throw bad(path, "missing digest line");
    const std::string payload = text.substr(0, digest_at);
    size_t eol = text.find('\n', digest_at);
    if (eol == std::string::npos) eol = text.size();
    const std::string stored =
        text.substr(digest_at + marker.size(), eol - digest_at - marker.size());
    if (sha256_hex(payload) != stored) throw bad(path, "digest mismatch");

    Certificate c;
    c.digest = stored;
    std::istringstream lines(payload);
    std::string line;
    if (!std::getline(lines, line) || line != "BILAP-CERT v1")
        throw bad(path, "bad magic line");

    Rational x0;
    long intervals = 0;
    bool have_result = false;
    while (std::getline(lines, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto rest = [&] {
            std::string r;
            std::getline(ls, r);
            if (!r.empty() && r.front() == ' ') r.erase(0, 1);
            return r;
        };
        if (key == "N") ls >> c.params.N;
        else if (key == "x0") x0 = parse_rational(rest());
        else if (key == "intervals") ls >> intervals;
        else if (key == "m") ls >> c.params.m;
        else if (key == "lambda") c.params.lambda = parse_rational(rest());
        else if (key == "eps0") c.params.eps0 = parse_rational(rest());
        else if (key == "eps") c.params.eps = parse_rational(rest());
        else if (key == "beta") c.params.beta = parse_rational(rest());
        else if (key == "beta_bar") c.params.beta_bar = parse_rational(rest());
        else if (key == "alpha") c.params.alpha = parse_rational(rest());
        else if (key == "cap") c.cap = Integer(rest());
        else if (key == "profile_w" || key == "profile_psi") {
            std::string algo, hex;
            ls >> algo >> hex;
            if (algo != "sha256" || hex.size() != 64) throw bad(path, "bad profile digest");
            (key == "profile_w" ? c.w_digest : c.psi_digest) = hex;
        } else if (key == "check") {
            CheckResult ck;
            std::string status, kw1, margin, kw2, loc;
            ls >> ck.name >> status >> kw1 >> margin >> kw2 >> loc;
            if (kw1 != "margin" || kw2 != "at") throw bad(path, "bad check line");
            if (status == "passed") ck.status = CheckStatus::passed;
            else if (status == "failed") ck.status = CheckStatus::failed;
            else if (status == "skipped") ck.status = CheckStatus::skipped;
            else throw bad(path, "bad check status");
            ck.worst_margin = parse_rational(margin);
            ck.worst_location = parse_rational(loc);
            c.checks.push_back(ck);
        } else if (key == "result") {
            std::string what;
            ls >> what;
            have_result = true;
            if (what == "certified") c.certified = true;
            else if (what == "refused") { c.certified = false; c.reason = rest(); }
            else throw bad(path, "bad result line");
        } else if (key == "enclosure_lower") c.lower = parse_rational(rest());
        else if (key == "enclosure_upper") c.upper = parse_rational(rest());
        else throw bad(path, "unknown payload key: " + key);
        if (ls.fail()) throw bad(path, "malformed line: " + line);
    }
    if (!have_result) throw bad(path, "missing result line");
    if (c.params.N == 0 || intervals == 0) throw bad(path, "missing header fields");
    c.params.grid = Grid::make(x0, intervals);
    return c;
}

}  // namespace bilap
