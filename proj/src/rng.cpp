#include "corrbc/rng.hpp"

#include <cmath>

namespace corrbc {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

RngStream::RngStream(std::uint64_t seed) : key_(splitmix64(seed + kGolden)) {}

RngStream::RngStream(std::uint64_t key, bool) : key_(key) {}

RngStream RngStream::substream(std::uint64_t id) const {
    return RngStream(splitmix64(key_ ^ splitmix64(id * kGolden + 0x632BE59BD9B4E019ULL)), true);
}

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return splitmix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
    // 53 random bits, shifted off zero.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double two_pi = 6.283185307179586476925;
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = radius * std::sin(two_pi * u2);
    has_cached_ = true;
    return radius * std::cos(two_pi * u2);
}

std::complex<double> RngStream::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * 0.70710678118654752440, im * 0.70710678118654752440};
}

}  // namespace corrbc
