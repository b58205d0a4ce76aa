#pragma once

#include <cmath>
#include <cstdint>

namespace slsh {

/// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Derives an independent stream seed from a master seed and up to three
/// lane indices. Every sampler in the library seeds its sub-streams this
/// way, so draws are reproducible regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (b + 0xbb67ae8584caa73bULL));
    h = mix64(h ^ (c + 0x3c6ef372fe94f82bULL));
    return h;
}

/// Counter-based SplitMix64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via the Marsaglia polar method.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_unit() - 1.0;
            v = 2.0 * next_unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Accumulates hash symbols into a 64-bit bucket key. Order-sensitive.
inline std::uint64_t combine_symbol(std::uint64_t key, std::uint64_t symbol) {
    return mix64(key ^ (symbol + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2)));
}

}  // namespace slsh
