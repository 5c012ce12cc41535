#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace mtec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
    // FNV-1a 64
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Counter-based deterministic stream. Sub-streams are derived from
// (master seed, label, index) so that independent concerns (arrivals,
// failures, jitter, baseline draws) never share state. This keeps paired
// comparisons valid: the scheduler under test cannot perturb the
// environment draws.
class rng_stream {
public:
    rng_stream() : state_(0x853C49E6748FEA9BULL) {}
    explicit rng_stream(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        splitmix64(state_);
    }

    static rng_stream derive(std::uint64_t master_seed, std::string_view label,
                             std::uint64_t index = 0) {
        std::uint64_t s = master_seed;
        splitmix64(s);
        s ^= hash_label(label);
        splitmix64(s);
        s ^= index * 0xD6E8FEB86659FD93ULL;
        return rng_stream(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in (0,1); never returns 0 or 1 exactly
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // inverse-CDF exponential draw; +inf when rate is zero
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(uniform()) / rate;
    }

    // Box-Muller standard normal
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace mtec
