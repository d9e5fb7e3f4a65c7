#pragma once

#include <cmath>
#include <cstdint>

namespace spdc {

/// Minimal counter-based generator (splitmix64). Used instead of <random>
/// engines so that sampled counts are identical across standard libraries
/// and independent streams can be derived per matrix cell.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Independent stream for cell (i, j) of a matrix build: the stream depends
/// only on (seed, i, j), never on evaluation order, so parallel builds are
/// deterministic.
inline SplitMix64 cell_rng(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    SplitMix64 mixer(seed);
    mixer.state ^= mixer.next() + 0x9e3779b97f4a7c15ull * (i + 1);
    mixer.state ^= mixer.next() + 0xc2b2ae3d27d4eb4full * (j + 1);
    mixer.next();
    return mixer;
}

namespace detail {

/// Knuth product method; requires mean small enough that exp(-mean) > 0.
inline long poisson_knuth(SplitMix64& rng, double mean) {
    const double limit = std::exp(-mean);
    double product = 1.0;
    long k = 0;
    do {
        ++k;
        product *= rng.uniform();
    } while (product > limit);
    return k - 1;
}

} // namespace detail

/// Poisson sample, chunked by additivity so exp(-mean) never underflows.
inline long poisson(SplitMix64& rng, double mean) {
    long total = 0;
    while (mean > 500.0) {
        total += detail::poisson_knuth(rng, 500.0);
        mean -= 500.0;
    }
    if (mean > 0.0) total += detail::poisson_knuth(rng, mean);
    return total;
}

} // namespace spdc
