#pragma once

#include <cstdint>

#include "nslab/common.hpp"

namespace nslab {

/// Deterministic 64-bit generator (splitmix64 stream). Uniform doubles are
/// produced directly from the raw stream so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform angle in [0, 2 pi).
    double angle() { return uniform() * kTwoPi; }

    /// Derives an independent stream for a substream index.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return r.next_u64();
    }

  private:
    std::uint64_t state_;
};

}  // namespace nslab
