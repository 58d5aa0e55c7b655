#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace semmap {

// Draws are built from raw mt19937_64 output instead of
// std::uniform_real_distribution, whose bit stream is
// implementation-defined; seeded runs must replay identically.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53; // [0, 1)
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Fisher-Yates; uses the same raw stream for reproducibility.
template <typename T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen() % i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace semmap
