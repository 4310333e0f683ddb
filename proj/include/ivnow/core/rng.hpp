#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ivnow {

// splitmix64; used to whiten (seed, stream) pairs into engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_text(std::string_view s) {
    // FNV-1a
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Deterministic RNG with fully specified output. std::mt19937_64 is
// bit-portable; the distribution helpers below avoid the standard
// distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Independent stream derived from (seed, stream ids).
    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        return Rng(splitmix64(seed) ^ splitmix64(a * 0x9e3779b97f4a7c15ULL + 1) ^
                   splitmix64(b + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, bound) via rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold)
                return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller (one value per call, cached pair).
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.141592653589793 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    int poisson(double lambda) {
        // Knuth for small lambda, normal approximation above 30.
        if (lambda <= 0.0)
            return 0;
        if (lambda > 30.0) {
            double v = lambda + std::sqrt(lambda) * gauss();
            return v < 0.0 ? 0 : static_cast<int>(v + 0.5);
        }
        double limit = std::exp(-lambda);
        double prod = 1.0;
        int n = 0;
        do {
            prod *= uniform01();
            ++n;
        } while (prod > limit);
        return n - 1;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ivnow
