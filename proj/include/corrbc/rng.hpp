#pragma once

#include <complex>
#include <cstdint>

namespace corrbc {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based stream: output i is splitmix64(key + i * golden). Streams are
// value types; substream() derives an independent key deterministically.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0);

    RngStream substream(std::uint64_t id) const;

    std::uint64_t next_u64();
    // Uniform on (0, 1), never 0.
    double uniform();
    double uniform(double lo, double hi);
    double normal();
    // CN(0, 1): real and imaginary parts N(0, 1/2).
    std::complex<double> complex_normal();

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    RngStream(std::uint64_t key, bool);

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace corrbc
