#pragma once

#include <cstddef>
#include <vector>

#include "polyent/metric_system.hpp"

namespace polyent {

// Greedy (n, eps)-separated subset of a table's sample: scan in table order,
// keep a point iff it is at d_n >= eps from every point kept so far.
// Returns the kept indices in increasing order.
std::vector<std::size_t> greedy_separated(const OrbitTable& table, std::size_t n, double eps);

// Greedy cover of the sample by d_n-balls of radius eps centred at sample
// points: repeatedly take the ball covering most uncovered points (lowest index
// on ties). Returns the number of balls.
std::size_t greedy_spanning(const OrbitTable& table, std::size_t n, double eps);

// Plain all-pairs versions of the same two procedures; single-threaded and
// index-free. Kept as the reference the indexed kernels are tested against.
namespace reference {
std::vector<std::size_t> greedy_separated(const OrbitTable& table, std::size_t n, double eps);
std::size_t greedy_spanning(const OrbitTable& table, std::size_t n, double eps);
}  // namespace reference

}  // namespace polyent
