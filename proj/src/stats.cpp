#include "dispatchopt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "dispatchopt/random.hpp"

namespace dispatchopt {

void validate_precision_policy(const PrecisionPolicy& policy) {
    if (!(policy.confidence > 0 && policy.confidence < 1)) {
        throw std::invalid_argument("confidence must lie in (0, 1)");
    }
    if (!(policy.delta > 0)) throw std::invalid_argument("delta must be positive");
    if (policy.max_n < 3) throw std::invalid_argument("max_n must be at least 3");
}

ConfidenceInterval mean_and_ci(std::span<const double> samples, double confidence) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("mean_and_ci needs at least two samples");
    if (!(confidence > 0 && confidence < 1)) {
        throw std::invalid_argument("confidence must lie in (0, 1)");
    }
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    const double t = t_quantile((1.0 + confidence) / 2.0, static_cast<double>(n - 1));
    return {mean, 2.0 * t * s / std::sqrt(static_cast<double>(n)), s};
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double student_t_density(double t, double df) {
    const double log_norm = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                            0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_norm - (df + 1) / 2 * std::log1p(t * t / df));
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0 && b > 0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("incomplete beta needs 0 <= x <= 1");
    if (x == 0 || x == 1) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0)) throw std::invalid_argument("degrees of freedom must be positive");
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2, 0.5, x);
    return t >= 0 ? 1.0 - tail : tail;
}

double t_quantile(double prob, double df) {
    if (!(prob > 0 && prob < 1)) throw std::invalid_argument("t_quantile: prob must be in (0, 1)");
    if (!(df > 0)) throw std::invalid_argument("t_quantile: df must be positive");
    if (prob == 0.5) return 0.0;
    if (prob < 0.5) return -t_quantile(1.0 - prob, df);

    // Upper-tail mass is solved for directly to keep precision near prob = 1.
    const double tail = 1.0 - prob;
    auto upper_tail = [df](double t) {
        return 0.5 * regularized_incomplete_beta(df / 2, 0.5, df / (df + t * t));
    };

    double lo = 0.0;
    double hi = 1.0;
    while (upper_tail(hi) > tail) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw std::domain_error("t_quantile: bracket search failed");
    }

    // Newton on the upper tail, falling back to bisection when a step leaves the bracket.
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = upper_tail(t) - tail;
        if (f > 0) lo = t; else hi = t;
        const double slope = -student_t_density(t, df);
        double next = t - f / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-14 * std::max(1.0, t)) return next;
        t = next;
    }
    return t;
}

double ReplicateSummary::relative_precision() const {
    return width / std::max(std::abs(mean), std::numeric_limits<double>::min());
}

std::uint64_t replicate_seed(std::uint64_t stream_seed, int index) {
    return derive_seed(stream_seed, static_cast<std::uint64_t>(index));
}

ReplicateSummary run_until_precise(const std::function<double(std::uint64_t)>& evaluator,
                                   const PrecisionPolicy& policy, std::uint64_t stream_seed) {
    validate_precision_policy(policy);
    ReplicateSummary summary;
    auto run_one = [&] {
        const auto seed = replicate_seed(stream_seed, summary.n);
        summary.seeds.push_back(seed);
        summary.samples.push_back(evaluator(seed));
        ++summary.n;
    };

    run_one();
    run_one();
    while (summary.n < policy.max_n) {
        run_one();
        const auto ci = mean_and_ci(summary.samples, policy.confidence);
        summary.mean = ci.mean;
        summary.width = ci.width;
        if (summary.relative_precision() <= policy.delta) {
            summary.precise = true;
            return summary;
        }
    }
    return summary;
}

}  // namespace dispatchopt
