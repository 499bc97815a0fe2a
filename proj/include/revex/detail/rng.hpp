#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace revex::detail {

// Bounded draw without std::uniform_int_distribution, whose output is
// implementation-defined; this keeps seeded runs portable.
inline std::uint32_t bounded(std::mt19937& rng, std::uint32_t n) {
    std::uint64_t x = rng();
    return static_cast<std::uint32_t>((x * n) >> 32);
}

template <typename T>
inline void shuffle(std::vector<T>& v, std::mt19937& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[bounded(rng, static_cast<std::uint32_t>(i))]);
    }
}

}  // namespace revex::detail
