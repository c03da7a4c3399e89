#ifndef PERCAP_RNG_HPP
#define PERCAP_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace percap {

// Counter-based splittable random stream keyed by (seed, stream_index).
// Stream i is an independent SplitMix64 window, so Monte-Carlo code can open
// one stream per sample index and obtain results that do not depend on which
// worker draws which sample. Fully self-contained: identical output on every
// platform and standard library.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : state_(mix(mix(seed) ^ (0x9E3779B97F4A7C15ULL * stream_index + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]; safe as a logarithm argument
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // circularly-symmetric complex Gaussian, zero mean, E|z|^2 = 1
    // (real and imaginary parts each have variance 1/2)
    std::complex<double> cgauss() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double t = 6.283185307179586476925286766559 * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace percap

#endif
