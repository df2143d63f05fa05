#pragma once

#include <string>
#include <vector>

#include "bilap/bounds.hpp"
#include "bilap/params.hpp"
#include "bilap/rational.hpp"
#include "bilap/verifier.hpp"

namespace bilap {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Self-describing record of one certification run.  The payload is canonical
// ASCII: identical inputs and results produce byte-identical payloads, so the
// digest is reproducible across machines and worker counts.
struct Certificate {
    DimensionParams params;
    Integer cap;                      // dyadic lattice bound used by the builder
    std::string w_digest;             // sha256 of the w profile file bytes
    std::string psi_digest;           // sha256 of the psi profile file bytes
    std::vector<CheckResult> checks;  // the 9 chain results, in order
    bool certified = false;
    std::string reason;               // refusal reason when not certified
    Rational lower, upper;            // the enclosure when certified
    std::string digest;               // sha256 of the payload (set on write/read)
};

// BILAP-CERT v1 layout: the payload lines, then
//   digest sha256 <hex>
// followed by optional "meta <key> <value>" lines excluded from the digest.
std::string certificate_payload(const Certificate& c);

void write_certificate(const std::string& path, Certificate& c,
                       const std::vector<std::pair<std::string, std::string>>& meta = {});

// Parses and re-hashes the payload; throws std::runtime_error when the stored
// digest does not match the bytes (tampered or truncated file).
Certificate read_certificate(const std::string& path);

}  // namespace bilap
