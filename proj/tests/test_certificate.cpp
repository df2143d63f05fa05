// Certificate serialization: canonical payload, digest integrity, and
// tamper-evident reads.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bilap/certificate.hpp"
#include "bilap/params.hpp"
#include "doctest.h"

using namespace bilap;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
}

Certificate sample_certificate() {
    Certificate c;
    c.params = coarse_params(13);
    c.cap = Integer(1) << 40;
    c.w_digest = sha256_hex("w bytes");
    c.psi_digest = sha256_hex("psi bytes");
    const char* names[9] = {"range",       "boundary",      "tail",
                            "subsolution", "supersolution", "psi_positive",
                            "psi_slope",   "alpha",         "stability"};
    for (const char* n : names) {
        CheckResult ck;
        ck.name = n;
        ck.status = CheckStatus::passed;
        ck.worst_margin = Rational(-355, 113);
        ck.worst_location = Rational(-9);
        c.checks.push_back(ck);
    }
    c.certified = true;
    c.lower = parse_rational("12436716333476926898638937/5100760434017235968000");
    c.upper = parse_rational("2439603/1000");
    return c;
}

// Writes payload + matching digest line: structurally valid bytes whose
// payload content can be chosen freely.
void write_raw(const std::string& path, const std::string& payload) {
    spit(path, payload + "digest sha256 " + sha256_hex(payload) + "\n");
}

}  // namespace

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    const std::string path = "cert_sha_file.tmp";
    spit(path, "abc");
    CHECK(sha256_file(path) == sha256_hex("abc"));
    std::remove(path.c_str());
    CHECK_THROWS_AS(sha256_file("no_such_file.tmp"), std::runtime_error);
}

TEST_CASE("payload is deterministic and the round trip preserves every field") {
    Certificate c = sample_certificate();
    CHECK(certificate_payload(c) == certificate_payload(c));

    const std::string path = "cert_roundtrip.tmp";
    write_certificate(path, c);
    CHECK(c.digest == sha256_hex(certificate_payload(c)));

    const Certificate r = read_certificate(path);
    CHECK(r.digest == c.digest);
    CHECK(r.params.N == c.params.N);
    CHECK(r.params.grid == c.params.grid);
    CHECK(r.params.m == c.params.m);
    CHECK(r.params.lambda == c.params.lambda);
    CHECK(r.params.eps0 == c.params.eps0);
    CHECK(r.params.eps == c.params.eps);
    CHECK(r.params.beta == c.params.beta);
    CHECK(r.params.beta_bar == c.params.beta_bar);
    CHECK(r.params.alpha == c.params.alpha);
    CHECK(r.cap == c.cap);
    CHECK(r.w_digest == c.w_digest);
    CHECK(r.psi_digest == c.psi_digest);
    REQUIRE(r.checks.size() == 9);
    for (size_t i = 0; i < 9; ++i) {
        CHECK(r.checks[i].name == c.checks[i].name);
        CHECK(r.checks[i].status == c.checks[i].status);
        CHECK(r.checks[i].worst_margin == c.checks[i].worst_margin);
        CHECK(r.checks[i].worst_location == c.checks[i].worst_location);
    }
    CHECK(r.certified);
    CHECK(r.reason.empty());
    CHECK(r.lower == c.lower);
    CHECK(r.upper == c.upper);

    // writing the parsed certificate again produces byte-identical files
    const std::string path2 = "cert_roundtrip_2.tmp";
    Certificate r2 = r;
    write_certificate(path2, r2);
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("meta lines are excluded from the digest") {
    Certificate a = sample_certificate();
    Certificate b = sample_certificate();
    const std::string pa = "cert_meta_a.tmp";
    const std::string pb = "cert_meta_b.tmp";
    write_certificate(pa, a);
    write_certificate(pb, b,
                      {{"created", "2026-08-16T00:00:00Z"}, {"workers", "16"},
                       {"wall_clock_seconds", "12.345"}});
    CHECK(a.digest == b.digest);

    const Certificate ra = read_certificate(pa);
    const Certificate rb = read_certificate(pb);
    CHECK(ra.digest == rb.digest);
    CHECK(certificate_payload(ra) == certificate_payload(rb));

    // the meta block is the only difference between the two files
    const std::string bytes_a = slurp(pa);
    const std::string bytes_b = slurp(pb);
    CHECK(bytes_b.substr(0, bytes_a.size()) == bytes_a);
    CHECK(bytes_b.size() > bytes_a.size());
    std::remove(pa.c_str());
    std::remove(pb.c_str());
}

TEST_CASE("a refusal round trips with its reason text intact") {
    Certificate c = sample_certificate();
    c.certified = false;
    c.reason = "check subsolution failed";
    c.checks[3].status = CheckStatus::failed;
    c.checks[3].worst_margin = Rational(7, 2);
    for (size_t i = 4; i < 9; ++i) c.checks[i].status = CheckStatus::skipped;
    c.lower = 0;
    c.upper = 0;

    const std::string path = "cert_refused.tmp";
    write_certificate(path, c);
    const Certificate r = read_certificate(path);
    CHECK(!r.certified);
    CHECK(r.reason == "check subsolution failed");
    CHECK(r.checks[3].status == CheckStatus::failed);
    CHECK(r.checks[8].status == CheckStatus::skipped);
    CHECK(r.lower == 0);
    CHECK(r.upper == 0);
    std::remove(path.c_str());
}

TEST_CASE("tampering or truncation is detected") {
    Certificate c = sample_certificate();
    const std::string path = "cert_tamper.tmp";
    write_certificate(path, c);
    const std::string good = slurp(path);

    // flip one digit inside the payload (the lambda line)
    std::string bad = good;
    const size_t at = bad.find("lambda 12193/5");
    REQUIRE(at != std::string::npos);
    bad[at + 7] = '2';
    spit(path, bad);
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("digest mismatch"),
                         std::runtime_error);

    // corrupt the stored digest itself
    bad = good;
    const size_t dig = bad.find("digest sha256 ");
    REQUIRE(dig != std::string::npos);
    bad[dig + 14] = (bad[dig + 14] == 'f') ? '0' : 'f';
    spit(path, bad);
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("digest mismatch"),
                         std::runtime_error);

    // truncate before the digest line: nothing left to authenticate
    spit(path, good.substr(0, good.size() / 2));
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("missing digest line"),
                         std::runtime_error);

    // appending after the digest line does not affect authentication
    spit(path, good + "meta note appended-by-hand\n");
    CHECK(read_certificate(path).digest == c.digest);

    std::remove(path.c_str());
    CHECK_THROWS_AS(read_certificate("cert_does_not_exist.tmp"), std::runtime_error);
}

TEST_CASE("structurally invalid payloads are rejected after authentication") {
    const std::string path = "cert_invalid.tmp";

    write_raw(path, "NOPE v9\n");
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("bad magic"),
                         std::runtime_error);

    write_raw(path, "BILAP-CERT v1\nbogus 1\nresult refused x\nN 13\nx0 -9\nintervals 4\n");
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("unknown payload key"),
                         std::runtime_error);

    write_raw(path, "BILAP-CERT v1\nN 13\nx0 -9\nintervals 4\n");
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("missing result line"),
                         std::runtime_error);

    write_raw(path, "BILAP-CERT v1\nresult refused because\n");
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("missing header fields"),
                         std::runtime_error);

    write_raw(path, "BILAP-CERT v1\nprofile_w sha256 tooshort\nresult refused x\n");
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("bad profile digest"),
                         std::runtime_error);

    write_raw(path,
              "BILAP-CERT v1\ncheck range passed margin 1/2 somewhere 0\n"
              "N 13\nx0 -9\nintervals 4\nresult refused x\n");
    CHECK_THROWS_WITH_AS(read_certificate(path), doctest::Contains("bad check line"),
                         std::runtime_error);

    std::remove(path.c_str());
}
