#ifndef TRAJANOM_RNG_HPP
#define TRAJANOM_RNG_HPP

#include <cstdint>
#include <random>

namespace trajanom {

/// SplitMix64 step; used for seed derivation, not as a general RNG.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and two stream tags.
/// The arithmetic is fixed so that callers (and tests) can replay any stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ (stream * 0x9e3779b97f4a7c15ULL)) ^ index);
}

/// Thin deterministic RNG stream. All randomness in the project goes through
/// this wrapper so draw sequences are reproducible per (seed, stream).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }

    double uniform_range(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace trajanom

#endif
