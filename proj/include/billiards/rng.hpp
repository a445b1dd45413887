#pragma once

#include <cmath>
#include <cstdint>

namespace billiards {

// Counter-based generator in the SplitMix64 family (Steele, Lea & Flood 2014):
// output k is mix(base + k*GAMMA), so streams are O(1)-skippable and a
// (seed, stream) pair fully determines the sequence independent of scheduling.
// Replica r of a run with master seed s draws from Rng(s, r); replicas never
// share a stream, which keeps parallel reductions bit-reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed + 0x9e3779b97f4a7c15ULL * (2 * stream + 1)) ^
                 mix(stream + 0xbf58476d1ce4e5b9ULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection keeps the draw exactly uniform.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Box-Muller; self-contained so sequences do not depend on libstdc++
    // distribution internals.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace billiards
