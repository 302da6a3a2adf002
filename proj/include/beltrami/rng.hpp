#pragma once

#include <cstdint>
#include <random>

namespace beltrami {

// Deterministic uniform source. The double mapping is pinned explicitly
// (53 high bits of the mt19937_64 stream) so identical seeds produce
// identical samples on every platform and under any thread count.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in the open interval (lo, hi); redraws the measure-zero endpoint
    double next_in(double lo, double hi) {
        double u = next_unit();
        while (u == 0.0) u = next_unit();
        return lo + u * (hi - lo);
    }

    int next_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_unit() * (hi - lo + 1));
    }

    // stable stream splitting (retry draws, per-slot substreams)
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        return x;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace beltrami
