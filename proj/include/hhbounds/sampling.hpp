#pragma once

#include <cstdint>
#include <random>

namespace hhbounds {

// Deterministic uniform sampler. Doubles are built from the top 53 bits of a
// mt19937_64 draw, so a fixed seed reproduces the exact same stream on every
// platform and standard library.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

private:
    std::mt19937_64 rng_;
};

}  // namespace hhbounds
