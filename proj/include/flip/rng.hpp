#pragma once

#include <cstdint>
#include <random>

namespace flip {

// Deterministic random source. All draws go through next_u64/next_double/next_int so
// results are bit-for-bit reproducible across platforms; std::*_distribution is
// implementation-defined and must not be used anywhere in the library.
class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    uint64_t seed() const { return seed_; }

    // Independent stream derived from the same root seed.
    Rng split(uint64_t stream) const {
        return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    }

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), debiased (Lemire's method with rejection).
    uint64_t next_int(uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

  private:
    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace flip
