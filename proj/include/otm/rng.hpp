#pragma once

#include <cmath>
#include <cstdint>

namespace otm {

// ------------------------------------------------------------------ RNG ----
//
// Deterministic 64-bit generator (splitmix64, public-domain constants).
// <random> engines and distributions are deliberately avoided: their output
// is implementation-defined, and sampled results must be reproducible
// bit-for-bit across standard libraries, platforms, and thread counts.
// splitmix64 has a single word of state and costs a handful of arithmetic
// ops per draw; campaigns pull billions of variates through it.

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

// Seed of an independent child stream.  (parent, index) is funneled through
// an extra scramble so adjacent indices land nowhere near each other in the
// parent sequence.  Streams are arranged hierarchically --
// campaign seed -> trial -> job -> observable -- which makes every sampled
// number independent of execution order and thread count.
inline std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t index) {
    SplitMix64 g(parent ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return g.next();
}

inline std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t a,
                                   std::uint64_t b) {
    return derive_stream(derive_stream(parent, a), b);
}

// ---------------------------------------------------- Bernoulli sampling ----
//
// P(draw < threshold(p)) = p at 2^-64 granularity.  Comparing raw 64-bit
// draws against a precomputed integer threshold costs ~1 ns/shot; drawing
// doubles instead would roughly double campaign runtime.  The endpoints are
// exact on purpose: p <= 0 never fires and p >= 1 always fires, so a
// degenerate outcome distribution is sampled without noise.

struct BernoulliGate {
    std::uint64_t threshold = 0;  // draw < threshold  =>  success
    bool always = false;          // p >= 1: success regardless of draw

    explicit BernoulliGate(double p) {
        if (p >= 1.0) {
            always = true;
        } else if (p > 0.0) {
            // ldexp(p, 64) < 2^64 for every double p < 1, so the cast is safe.
            threshold = static_cast<std::uint64_t>(std::ldexp(p, 64));
        }
        // p <= 0 (or NaN): keep threshold 0, never fires.
    }

    bool fire(SplitMix64& g) const { return always || g.next() < threshold; }
};

}  // namespace otm
