#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "magchain/vec3.hpp"

namespace magchain {

// Cascade (pairwise) summation. Rounding error grows like O(log n) and the
// result depends only on the order of the input, never on how callers chunk it.
template <class T>
T pairwise_sum(std::span<const T> values) {
    constexpr std::size_t kBlock = 8;
    if (values.size() <= kBlock) {
        T acc{};
        for (const T& v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values));
}

}  // namespace magchain
