#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "sigforge/types.hpp"

namespace sigforge {

// Deterministic random stream built on splitmix64 + xoshiro-style output.
// Uniform/Gaussian draws are generated with explicit bit arithmetic and
// Box-Muller so streams are bit-reproducible across standard libraries.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : state_(seed) {
        // Warm the state so small seeds decorrelate.
        next_u64();
        next_u64();
    }

    // Counter-based split: trial streams derived from a master seed are
    // independent of evaluation order.
    static RngStream derive(uint64_t master, uint64_t a, uint64_t b = 0) {
        uint64_t s = mix(master ^ mix(a + 0x517cc1b727220a95ULL));
        s = mix(s ^ mix(b + 0x2545f4914f6cdd1dULL));
        return RngStream(s);
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller, spare value cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    // Circularly-symmetric complex Gaussian with the given total variance.
    cplx complex_gaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

    int binary_chip() { return (next_u64() >> 63) ? 1 : -1; }

    cplx quaternary_chip() {
        switch (next_u64() >> 62) {
            case 0: return {1, 0};
            case 1: return {-1, 0};
            case 2: return {0, 1};
            default: return {0, -1};
        }
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sigforge
