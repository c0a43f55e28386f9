#pragma once

#include <cstdint>

namespace sprank {

/// splitmix64 stream. Used instead of <random> engines so that seeded runs
/// produce identical bytes on every platform and standard library.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound). bound must be nonzero.
    uint64_t below(uint64_t bound) {
        // rejection sampling on the top range keeps the draw unbiased
        uint64_t limit = bound * (UINT64_MAX / bound);
        uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

    /// Derive an independent stream (for per-sample reproducibility).
    Rng fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

  private:
    uint64_t state_;
};

} // namespace sprank
