#pragma once

#include <cmath>
#include <cstdint>

namespace slora {

// Deterministic xoshiro256++ generator. Self-contained so that simulation
// output is reproducible across standard libraries and platforms; the std::
// distributions make no such guarantee.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        // splitmix64 expansion of the seed into the full state
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n] inclusive
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire rejection; unbiased
        const std::uint64_t range = n + 1;
        if (range == 0) return next_u64();
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * range;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < range) {
            const std::uint64_t threshold = -range % range;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * range;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // exponential with the given mean
    double exponential(double mean) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -mean * std::log(u);
    }

    // standard normal, Box-Muller (fresh pair each call, no cached state)
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double lognormal(double mu_log, double sigma_log) {
        return std::exp(mu_log + sigma_log * normal());
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

// Stream derivation: every (master seed, purpose, index) triple owns an
// independent stream, so adding nodes or reordering draws in one stream never
// perturbs another.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index) {
    std::uint64_t z = master ^ (purpose * 0x9E3779B97F4A7C15ULL) ^ (index + 0x632BE59BD9B4E019ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// purpose tags for derive_seed
inline constexpr std::uint64_t kStreamTraffic = 1;
inline constexpr std::uint64_t kStreamMac = 2;
inline constexpr std::uint64_t kStreamClock = 3;
inline constexpr std::uint64_t kStreamJitter = 4;
inline constexpr std::uint64_t kStreamFault = 5;

} // namespace slora
