#pragma once

#include <cstdint>
#include <random>

namespace sskm {

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
/// Unlike std::uniform_real_distribution this mapping is pinned, so seeded
/// sequences are reproducible across standard libraries.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    auto idx = static_cast<std::size_t>(uniform_unit(gen) * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

}  // namespace sskm
