#include "dispatchopt/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dispatchopt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RandomStream::exponential(double rate) {
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log1p(-uniform01()) / rate;
}

double RandomStream::normal(double mean, double sigma) {
    // Box-Muller, one variate per call.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = (~std::uint64_t{0} / span) * span;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

double RandomStream::draw(const Distribution& distribution) {
    if (const auto* e = std::get_if<Exponential>(&distribution)) {
        if (!(e->rate > 0)) throw std::invalid_argument("exponential rate must be positive");
        return exponential(e->rate);
    }
    const auto& u = std::get<Uniform>(distribution);
    if (!(u.lo <= u.hi)) throw std::invalid_argument("uniform range requires lo <= hi");
    return uniform(u.lo, u.hi);
}

}  // namespace dispatchopt
