#pragma once

#include <cstdint>
#include <random>

#include "dlrc/series.hpp"

namespace dlrc {

/// All randomized code paths draw from an explicitly seeded mt19937_64;
/// there is no hidden entropy anywhere in the library.
inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Series of iid uniform entries in [lo, hi].
inline InputSeries random_series(int length, std::mt19937_64& rng, double lo = -1.0,
                                 double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(length);
    for (int i = 0; i < length; ++i) v(i) = dist(rng);
    return InputSeries(std::move(v));
}

}  // namespace dlrc
