#pragma once

#include <cstdint>

namespace glsim {

// Counter-based generator: output i of stream s under seed k is
// mix(key(k,s) + (i+1)*GOLDEN), where mix is the SplitMix64 finalizer.
// Streams derived from (seed, stream index) are independent of each other
// and of the order in which they are consumed, which is what makes
// per-game / per-trial parallelism reproducible. The exact construction is
// documented in the README; changing it changes every seeded output.
class CounterRng {
  public:
    static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : key_(mix(seed + kGolden) ^ mix(stream * kGolden + 0xD1B54A32D192ED03ull)) {}

    // Child stream generator: deterministic function of (parent key, index).
    CounterRng stream(uint64_t index) const {
        CounterRng child(0);
        child.key_ = mix(key_ ^ (index * kGolden + 0x8CB92BA72F3D8DD7ull));
        child.counter_ = 0;
        return child;
    }

    uint64_t next() { return mix(key_ + (++counter_) * kGolden); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Exactly uniform on {0,...,bound-1} via rejection.
    uint64_t bounded(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t v = next();
            if (v >= threshold) return v % bound;
        }
    }

    bool coin(double p) { return uniform01() < p; }

  private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace glsim
