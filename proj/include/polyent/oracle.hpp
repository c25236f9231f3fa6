#pragma once

#include <cstddef>

#include "polyent/metric_system.hpp"

namespace polyent {

inline constexpr std::size_t kSepOracleCap = 40;
inline constexpr std::size_t kCoverOracleCap = 20;

// Exact counts over a whole (small) orbit table P, for the dynamic metric d_n:
//  sep  - largest subset with pairwise d_n >= eps;
//  span - fewest open d_n-balls of radius eps, centred in P, covering P;
//  cov  - fewest subsets of P of d_n-diameter < eps covering P.
std::size_t exact_sep(const OrbitTable& table, std::size_t n, double eps);
std::size_t exact_span(const OrbitTable& table, std::size_t n, double eps);
std::size_t exact_cov(const OrbitTable& table, std::size_t n, double eps);

}  // namespace polyent
