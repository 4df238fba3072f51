#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace nk {

/// splitmix64 stream. Self-contained so reports are byte-identical across
/// platforms and thread counts; per-sample streams are derived by mixing the
/// master seed with the sample index.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    static Rng for_sample(uint64_t master_seed, uint64_t index) {
        Rng r(master_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
        r.next();
        return r;
    }

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform on the unit 2-sphere (Box-Muller gaussians, normalized).
    std::array<double, 3> unit3() {
        for (;;) {
            double u1 = next_double(), u2 = next_double(), u3 = next_double(), u4 = next_double();
            if (u1 == 0.0 || u3 == 0.0) continue;
            double r1 = std::sqrt(-2.0 * std::log(u1));
            double r2 = std::sqrt(-2.0 * std::log(u3));
            double g0 = r1 * std::cos(6.283185307179586477 * u2);
            double g1 = r1 * std::sin(6.283185307179586477 * u2);
            double g2 = r2 * std::cos(6.283185307179586477 * u4);
            double n = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2);
            if (n < 1e-8) continue;
            return {g0 / n, g1 / n, g2 / n};
        }
    }

    /// Small random rational p/q with |p| <= 8, 1 <= q <= 8 (exact backend).
    std::pair<long long, long long> small_rational() {
        long long num = static_cast<long long>(next() % 17) - 8;
        long long den = static_cast<long long>(next() % 8) + 1;
        return {num, den};
    }
};

}  // namespace nk
