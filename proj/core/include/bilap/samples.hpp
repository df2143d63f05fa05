#pragma once

#include <string>
#include <vector>

namespace bilap {

// Untrusted floating output of the numerical solves: fourth-derivative values
// at the n+1 uniform knots. lambda_hat is meaningful for w solves; psi sample
// files carry the lambda_hat of the w solve they were driven by.
struct ProfileSamples {
    int N = 0;
    double x0 = 0;
    long n = 0;
    std::vector<double> d4;  // size n+1
    double lambda_hat = 0;
};

// Text format: "N <int>", "x0 <float>", "intervals <n>", "lambda_hat <float>",
// then one float per knot, 17 significant digits.
void write_samples(const std::string& path, const ProfileSamples& s);
ProfileSamples read_samples(const std::string& path);

}  // namespace bilap
