#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "qprot/spin.hpp"

namespace test_util {

using qprot::cd;
using qprot::Mat;
using qprot::Vec;

// Largest entrywise deviation after removing one global phase (the phase of the
// largest-magnitude entry of a against the same entry of b).
inline double phase_aligned_diff(const Vec& a, const Vec& b) {
    int pivot = 0;
    a.cwiseAbs().maxCoeff(&pivot);
    const cd ratio = a(pivot) / b(pivot);
    return (a - b * (ratio / std::abs(ratio))).cwiseAbs().maxCoeff();
}

inline Vec to_vec(const std::vector<cd>& entries) {
    Vec v(static_cast<long>(entries.size()));
    for (long i = 0; i < v.size(); ++i) v(i) = entries[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace test_util
