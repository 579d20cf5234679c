#pragma once

#include <cstdint>
#include <string_view>

namespace entityrank {

/// Counter-based splitmix64 generator. Used everywhere a reproducible
/// stream is needed (OOV vectors, tree seeds, CV shuffles, synthetic data)
/// so results do not depend on the standard library's distributions.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    /// Uniform integer in [0, n). n must be > 0.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next()) * static_cast<__uint128_t>(n)) >> 64);
    }

  private:
    uint64_t state_;
};

inline uint64_t splitmix64_mix(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// 64-bit FNV-1a over raw bytes.
inline uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Combine a master seed with an index into an independent stream seed.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    return splitmix64_mix(master ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

}  // namespace entityrank
