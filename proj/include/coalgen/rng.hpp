#pragma once

// The one random source used anywhere in the library.
//
// Contract: a fixed seed reproduces every generated collection byte for byte
// on the same build. To keep that promise independent of standard-library
// internals, the samplers below are defined here rather than borrowed from
// <random>'s distributions (whose algorithms are implementation-defined);
// only the mt19937_64 engine itself, which is fully specified, is reused.
//
//   - uniform_double():    53-bit mantissa draw in [0, 1)
//   - uniform_real(a, b):  a + (b - a) * uniform_double()
//   - uniform_index(n):    next_u64() % n
//   - bernoulli(p):        uniform_double() < p
//   - sample_indices:      partial Fisher-Yates, k draws
//
// Per-stage seeds are decorrelated from the user seed with splitmix64.

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "coalgen/errors.hpp"

namespace coalgen {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// k-th splitmix64 output seeded by `seed` (k >= 1); used to give each
// generation stage its own stream.
inline std::uint64_t stage_seed(std::uint64_t seed, unsigned k) {
    std::uint64_t s = seed;
    std::uint64_t v = 0;
    for (unsigned i = 0; i < k; ++i) v = splitmix64(s);
    return v;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1), 53 significant bits.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_double(); }

    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw GenerationError("uniform_index: empty range");
        return static_cast<std::size_t>(next_u64() % n);
    }

    bool bernoulli(double p) { return uniform_double() < p; }

    // k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        if (k > n) throw GenerationError("sample_indices: k exceeds population");
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + uniform_index(n - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace coalgen
