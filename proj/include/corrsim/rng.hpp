#pragma once

#include <cmath>
#include <cstdint>

namespace corrsim {

// Finalizer of SplitMix64 (Steele, Lea, Flood). Bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    return mix64(state += 0x9e3779b97f4a7c15ULL);
}

// xoshiro256** (Blackman, Vigna), seeded through SplitMix64. Hand-rolled so
// that streams are identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); endpoints are never returned, so
    // logs and quantile transforms stay finite.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller; every transform yields two values.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * uniform();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double exponential() { return -std::log(uniform()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Independent child stream for a (seed, a, b, c) key. Streams for distinct
// keys are decorrelated by the mixer, which makes replicate-level parallelism
// order-independent: stream identity depends only on the key, never on which
// thread runs it.
inline Rng substream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
    std::uint64_t key = master;
    key = mix64(key + 0x9e3779b97f4a7c15ULL + a);
    key = mix64(key + 0x9e3779b97f4a7c15ULL + b);
    key = mix64(key + 0x9e3779b97f4a7c15ULL + c);
    return Rng(key);
}

} // namespace corrsim
