#pragma once

#include <cstdint>

namespace crashlab {

// SplitMix64 stream. Single 64-bit state, trivially serializable, and
// splittable: child streams are seeded from the parent without disturbing
// the parent's sequence more than one draw.
class Rng {
public:
    Rng() = default;
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via Box-Muller (two draws per call, no cached state so
    // the stream stays position-independent).
    double next_gaussian();

    Rng split() { return Rng(next_u64() ^ 0xd6e8feb86659fd93ULL); }

    uint64_t state() const { return state_; }
    void set_state(uint64_t s) { state_ = s; }

private:
    uint64_t state_{0x853c49e6748fea9bULL};
};

}  // namespace crashlab
