#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dispatchopt {

struct PrecisionPolicy {
    double confidence = 0.95;
    double delta = 0.05;  // stop once W / mean <= delta
    int max_n = 100;
};

/// Throws std::invalid_argument when the policy is out of range.
void validate_precision_policy(const PrecisionPolicy& policy);

struct ConfidenceInterval {
    double mean = 0.0;
    double width = 0.0;   // full width W, i.e. twice the half-width
    double stddev = 0.0;  // sample standard deviation (n - 1 denominator)

    double half_width() const { return width / 2.0; }
};

/// Student-t interval: W = 2 * t_{(1+confidence)/2, n-1} * s / sqrt(n).
/// Throws std::invalid_argument with fewer than two samples.
ConfidenceInterval mean_and_ci(std::span<const double> samples, double confidence = 0.95);

/// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

/// Quantile of Student's t with df degrees of freedom; df need not be integral.
/// Throws std::invalid_argument unless 0 < prob < 1 and df > 0.
double t_quantile(double prob, double df);

struct ReplicateSummary {
    int n = 0;
    double mean = 0.0;
    double width = 0.0;
    std::vector<double> samples;
    std::vector<std::uint64_t> seeds;
    bool precise = false;  // false when max_n stopped the loop first

    double relative_precision() const;
};

/// Seed handed to replicate i of a sequential run.
std::uint64_t replicate_seed(std::uint64_t stream_seed, int index);

/// Sequential replication: two runs, then one more at a time until
/// W / mean <= delta. The first check happens at n = 3. Stops at max_n with
/// `precise == false` if the target is never met.
ReplicateSummary run_until_precise(const std::function<double(std::uint64_t)>& evaluator,
                                   const PrecisionPolicy& policy, std::uint64_t stream_seed);

}  // namespace dispatchopt
