#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mralloc/numeric.hpp"

namespace mralloc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream.  A (seed, stream id) pair fully
/// determines the sequence, so every stochastic component draws from
/// its own child stream and runs are reproducible byte for byte.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : base_seed_(seed), stream_id_(stream), engine_(derive(seed, stream)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Unit-mean exponential deviate.
    double exp1() { return -std::log1p(-u01()); }

    /// Uniform phase on [0, 2*pi).
    double phase() { return 2.0 * pi * u01(); }

    /// Independent child stream; independent of the parent's draw position.
    RngStream split(std::uint64_t child_id) const {
        return RngStream(base_seed_, stream_id_ * 0x10001ULL + child_id + 1);
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (stream * 0xD2B74407B1CE6E93ULL);
        splitmix64(s);
        return splitmix64(s);
    }

    std::uint64_t base_seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace mralloc
