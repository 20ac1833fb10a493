#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmkey {

// All randomness flows through explicitly seeded engines. Independent
// streams are derived by hashing a base seed with a list of stream tags,
// so results never depend on evaluation order or thread scheduling.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = base;
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t p : parts) {
        state ^= p + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= splitmix64(state);
    }
    return h;
}

inline Rng make_rng(std::uint64_t base,
                    std::initializer_list<std::uint64_t> parts = {}) {
    return Rng(derive_seed(base, parts));
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
// A fresh distribution object per call keeps the draw count independent
// of call history.
inline std::complex<double> complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace mmkey
