#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mpdn {

// splitmix64 step; used to derive independent sub-seeds (per frame, per location).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic RNG. The engine (mt19937_64) is bit-exact per the C++ standard;
// the distributions are implemented here because the standard library's are
// implementation-defined and would break cross-run reproducibility guarantees.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1]; avoids log(0) in Box-Muller.
    double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

    // Standard normal via Box-Muller, caching the second deviate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Poisson(lambda): CDF inversion for small means, normal approximation above.
    // The switch point keeps inversion loops short and is part of the documented
    // per-platform determinism contract.
    long poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda <= 30.0) {
            const double u = uniform();
            double p = std::exp(-lambda);
            double cdf = p;
            long k = 0;
            while (u > cdf && k < 1000) {
                ++k;
                p *= lambda / static_cast<double>(k);
                cdf += p;
            }
            return k;
        }
        const double n = lambda + std::sqrt(lambda) * normal();
        return n < 0.0 ? 0 : static_cast<long>(std::lround(n));
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is fine here: n is tiny relative to 2^64.
        return n == 0 ? 0 : eng_() % n;
    }

    double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mpdn
