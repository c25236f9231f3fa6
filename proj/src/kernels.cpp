#include <algorithm>
#include <cstdint>
#include <queue>

#include "polyent/errors.hpp"
#include "polyent/kernels.hpp"

namespace polyent {

namespace {

void check_args(const OrbitTable& table, std::size_t n, double eps) {
  if (n == 0 || n > table.horizon()) throw DomainError("n must lie in 1..horizon of the orbit table");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
}

// Max-coverage greedy with lazy gain updates; picks the largest gain, lowest
// index on ties, exactly like the eager version.
std::size_t lazy_cover(const std::vector<std::vector<std::uint32_t>>& balls) {
  const std::size_t count = balls.size();
  std::vector<char> covered(count, 0);
  std::size_t remaining = count;
  using Item = std::pair<std::size_t, std::size_t>;  // gain, index
  auto worse = [](const Item& a, const Item& b) { return a.first < b.first || (a.first == b.first && a.second > b.second); };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> heap(worse);
  for (std::size_t c = 0; c < count; ++c) heap.emplace(balls[c].size(), c);
  std::size_t chosen = 0;
  while (remaining > 0) {
    auto [gain, c] = heap.top();
    heap.pop();
    std::size_t fresh = 0;
    for (std::uint32_t x : balls[c]) fresh += covered[x] ? 0 : 1;
    if (fresh != gain) {
      heap.emplace(fresh, c);
      continue;
    }
    for (std::uint32_t x : balls[c]) {
      if (!covered[x]) {
        covered[x] = 1;
        --remaining;
      }
    }
    ++chosen;
  }
  return chosen;
}

}  // namespace

std::vector<std::size_t> greedy_separated(const OrbitTable& table, std::size_t n, double eps) {
  check_args(table, n, eps);
  const std::size_t count = table.size();
  constexpr std::size_t kBlock = 4096;
  constexpr std::size_t kSampled = 8;
  std::vector<char> kept(count, 0);
  std::vector<std::size_t> out;
  std::vector<char> blocked(kBlock);
  std::vector<std::vector<std::uint32_t>> earlier(kBlock);  // in-block conflicts with lower index

  for (std::size_t start = 0; start < count; start += kBlock) {
    const std::size_t stop = std::min(count, start + kBlock);
    const auto width = static_cast<std::ptrdiff_t>(stop - start);
    // Either look up each point's candidates or, when candidate lists run
    // longer than the kept list, scan the kept list directly. Both give the
    // same decisions.
    std::size_t sampled = 0;
    {
      std::vector<std::uint32_t> cand;
      const std::size_t probe = std::min<std::size_t>(kSampled, stop - start);
      for (std::size_t i = start; i < start + probe; ++i) {
        table.candidates(i, n, eps, cand);
        sampled += cand.size();
      }
      sampled /= std::max<std::size_t>(probe, 1);
    }
    const bool scan = out.size() < sampled;

    // Against points kept in earlier blocks, and collect in-block conflicts;
    // the in-block decisions are then replayed serially in scan order.
#pragma omp parallel
    {
      std::vector<std::uint32_t> cand;
#pragma omp for schedule(dynamic, 32)
      for (std::ptrdiff_t off = 0; off < width; ++off) {
        const std::size_t i = start + static_cast<std::size_t>(off);
        auto& mine = earlier[static_cast<std::size_t>(off)];
        mine.clear();
        char hit = 0;
        if (scan) {
          for (std::size_t j : out) {
            if (table.within(i, j, n, eps)) {
              hit = 1;
              break;
            }
          }
        } else {
          table.candidates(i, n, eps, cand);
          for (std::uint32_t j : cand) {
            if (j >= i) break;
            if (j < start) {
              if (kept[j] && table.within(i, j, n, eps)) {
                hit = 1;
                break;
              }
            } else if (table.within(i, j, n, eps)) {
              mine.push_back(j);
            }
          }
        }
        blocked[static_cast<std::size_t>(off)] = hit;
      }
    }
    const std::size_t before = out.size();
    for (std::size_t i = start; i < stop; ++i) {
      const std::size_t off = i - start;
      if (blocked[off]) continue;
      bool clash = false;
      if (scan) {
        for (std::size_t m = before; m < out.size() && !clash; ++m) clash = table.within(i, out[m], n, eps);
      } else {
        for (std::uint32_t j : earlier[off]) {
          if (kept[j]) {
            clash = true;
            break;
          }
        }
      }
      if (clash) continue;
      kept[i] = 1;
      out.push_back(i);
    }
  }
  return out;
}

std::size_t greedy_spanning(const OrbitTable& table, std::size_t n, double eps) {
  check_args(table, n, eps);
  const std::size_t count = table.size();
  std::vector<std::vector<std::uint32_t>> balls(count);
  const auto width = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel
  {
    std::vector<std::uint32_t> cand;
#pragma omp for schedule(dynamic, 32)
    for (std::ptrdiff_t c = 0; c < width; ++c) {
      const auto centre = static_cast<std::size_t>(c);
      table.candidates(centre, n, eps, cand);
      auto& ball = balls[centre];
      for (std::uint32_t x : cand) {
        if (table.within(centre, x, n, eps)) ball.push_back(x);
      }
    }
  }
  return lazy_cover(balls);
}

namespace reference {

std::vector<std::size_t> greedy_separated(const OrbitTable& table, std::size_t n, double eps) {
  check_args(table, n, eps);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool separated = true;
    for (std::size_t j : out) {
      if (table.within(i, j, n, eps)) {
        separated = false;
        break;
      }
    }
    if (separated) out.push_back(i);
  }
  return out;
}

std::size_t greedy_spanning(const OrbitTable& table, std::size_t n, double eps) {
  check_args(table, n, eps);
  const std::size_t count = table.size();
  std::vector<std::vector<char>> ball(count, std::vector<char>(count, 0));
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t x = 0; x < count; ++x) ball[c][x] = table.within(c, x, n, eps) ? 1 : 0;
  }
  std::vector<char> covered(count, 0);
  std::size_t remaining = count;
  std::size_t chosen = 0;
  while (remaining > 0) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t gain = 0;
      for (std::size_t x = 0; x < count; ++x) gain += (ball[c][x] && !covered[x]) ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    for (std::size_t x = 0; x < count; ++x) {
      if (ball[best][x] && !covered[x]) {
        covered[x] = 1;
        --remaining;
      }
    }
    ++chosen;
  }
  return chosen;
}

}  // namespace reference

}  // namespace polyent
