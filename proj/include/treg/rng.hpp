#pragma once

// Seeded PRNG used across the pipeline. Everything downstream (dataset
// generation, weight init, shuffles) must be reproducible bit-for-bit from a
// seed, and std:: distributions are implementation-defined, so we roll our
// own on top of splitmix64.

#include <cmath>
#include <cstdint>

namespace treg {

// splitmix64, public-domain mixing function (Steele, Lea, Flood).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derive an independent child seed from (seed, tag). Used for the splittable
// per-record seeding rule: record i of object j uses
//   mix_seed(mix_seed(master, j + 1), i + 1).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(splitmix64(seed)) {}

    std::uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform double in [0, 1), 53 bits of mantissa.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    // Uniform integer in [0, n), n >= 1. Modulo bias is irrelevant at our n.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

// Deterministic Fisher-Yates shuffle (std::shuffle is not portable).
template <typename T>
void shuffle(T* data, std::size_t n, Rng& rng) {
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        T tmp = data[i - 1];
        data[i - 1] = data[j];
        data[j] = tmp;
    }
}

}  // namespace treg
