#ifndef CSLEARN_RNG_HPP
#define CSLEARN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace cslearn {

using RngSeed = std::uint64_t;

// Named substreams.  Every consumer derives its own generator from
// (seed, stream, indices...) so results do not depend on scheduling or on
// how many draws another component made.
enum Stream : std::uint64_t {
    kStreamRow = 1,        // one per sampled dataset row
    kStreamInit = 2,       // one per initial individual / random-search draw
    kStreamVariation = 3,  // one per (generation, offspring slot)
    kStreamSelect = 4,     // per-generation bookkeeping
    kStreamOracle = 5,     // seeds handed to stochastic oracles
    kStreamData = 6,       // per-repetition dataset sampling
};

// SplitMix64.  Chosen over std::mt19937 because the output sequence is
// fixed by this file alone, not by the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    // Derive an independent generator keyed by up to three stream indices.
    static Rng derive(RngSeed seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ull);
        h = mix(h ^ a);
        h = mix(h ^ b);
        h = mix(h ^ c);
        return Rng(h);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), rejection-corrected for bias.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % bound;
        } while (x - r > std::uint64_t(-1) - (bound - 1));
        return r;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    // Box-Muller; second variate of each pair is cached.
    double normal(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
        double u2 = next_unit();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return mean + stddev * radius * std::cos(angle);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace cslearn

#endif
