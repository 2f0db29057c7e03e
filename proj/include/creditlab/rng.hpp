#pragma once

#include <cmath>
#include <cstdint>

namespace creditlab {

// Deterministic 64-bit generator (splitmix64). Chosen over std::mt19937 because
// its entire output sequence is fixed by this header, independent of the
// standard library implementation.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1); never returns an endpoint.
    double uniform_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform in [-bound, +bound].
    double symmetric(double bound) { return bound * (2.0 * uniform() - 1.0); }

    // Standard normal via Box-Muller.
    double gaussian() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

  private:
    std::uint64_t state_;
};

// Stable per-index substream seed, used so that independently trained
// configurations get decorrelated generators regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    SplitMix64 g(base ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    return g.next();
}

}  // namespace creditlab
