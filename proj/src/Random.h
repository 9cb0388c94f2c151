#pragma once

#include <cmath>
#include <cstdint>

namespace cherry {

// splitmix64: fixed algorithm so that generated instances are byte-identical
// across platforms and standard library versions. Constants are the published
// ones (Steele, Lea, Flood 2014).
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t Next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound >= 1; rejection keeps it exactly uniform
    uint64_t Below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        while (true) {
            uint64_t r = Next();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    // uniform integer in [lo, hi], inclusive
    int64_t IntIn(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(Below(static_cast<uint64_t>(hi - lo) + 1));
    }

    // uniform in [0, 1) with 53 random bits
    double UnitDouble() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; one value per call, no caching, so the
    // consumed stream length is a fixed function of the call count
    double Gaussian() {
        double u1 = UnitDouble();
        double u2 = UnitDouble();
        while (u1 <= 0.0) {
            u1 = UnitDouble();
        }
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

  private:
    uint64_t state_;
};

}  // namespace cherry
