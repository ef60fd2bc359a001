#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace surgecast::rng {

// mt19937_64 output is pinned by the standard; the std distributions are
// not. Every draw here maps engine output to values explicitly so streams
// are reproducible across standard libraries.
using Engine = std::mt19937_64;

// Uniform double in [0, 1), 53-bit resolution.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform double in [-a, a).
inline double uniform_sym(Engine& eng, double a) {
    return (2.0 * uniform01(eng) - 1.0) * a;
}

// Unbiased integer in [0, n) via rejection.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % n;
}

// Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& items, Engine& eng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(eng, i));
        std::swap(items[i - 1], items[j]);
    }
}

// k distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Engine& eng);

// splitmix64 finalizer, used to derive independent seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(a, b), c);
}

} // namespace surgecast::rng
