#include <bit>
#include <cstdint>
#include <vector>

#include "polyent/errors.hpp"
#include "polyent/oracle.hpp"

namespace polyent {

namespace {

using Mask = std::uint64_t;

Mask bit(std::size_t i) { return Mask{1} << i; }

// close[i]: indices j != i with d_n(x_i, x_j) < eps.
std::vector<Mask> closeness(const OrbitTable& table, std::size_t n, double eps, std::size_t cap) {
  const std::size_t count = table.size();
  if (count == 0) throw DomainError("oracle needs a nonempty point set");
  if (count > cap) throw ResourceError("oracle point set larger than " + std::to_string(cap));
  if (n == 0 || n > table.horizon()) throw DomainError("n must lie in 1..horizon of the orbit table");
  std::vector<Mask> close(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (table.within(i, j, n, eps)) {
        close[i] |= bit(j);
        close[j] |= bit(i);
      }
    }
  }
  return close;
}

class IndependentSet {
 public:
  explicit IndependentSet(const std::vector<Mask>& close) : close_(close) {}

  std::size_t solve() {
    const Mask all = close_.size() == 64 ? ~Mask{0} : bit(close_.size()) - 1;
    search(all, 0);
    return best_;
  }

 private:
  void search(Mask free, std::size_t size) {
    if (free == 0) {
      if (size > best_) best_ = size;
      return;
    }
    if (size + static_cast<std::size_t>(std::popcount(free)) <= best_) return;
    // Branch on the free vertex with the most free neighbours.
    std::size_t pivot = 0;
    int degree = -1;
    for (Mask m = free; m; m &= m - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      const int d = std::popcount(close_[v] & free);
      if (d > degree) {
        degree = d;
        pivot = v;
      }
    }
    if (degree == 0) {
      search(0, size + static_cast<std::size_t>(std::popcount(free)));
      return;
    }
    search(free & ~bit(pivot) & ~close_[pivot], size + 1);
    search(free & ~bit(pivot), size);
  }

  const std::vector<Mask>& close_;
  std::size_t best_ = 0;
};

// Smallest number of the given sets covering `universe`, by iterative
// deepening on the lowest uncovered element.
std::size_t min_cover(const std::vector<Mask>& sets, Mask universe, std::size_t elements) {
  std::vector<std::vector<Mask>> containing(elements);
  for (Mask s : sets) {
    for (Mask m = s; m; m &= m - 1) containing[static_cast<std::size_t>(std::countr_zero(m))].push_back(s);
  }
  auto feasible = [&](auto&& self, Mask uncovered, std::size_t budget) -> bool {
    if (uncovered == 0) return true;
    if (budget == 0) return false;
    const auto x = static_cast<std::size_t>(std::countr_zero(uncovered));
    for (Mask s : containing[x]) {
      if (self(self, uncovered & ~s, budget - 1)) return true;
    }
    return false;
  };
  for (std::size_t k = 1; k <= elements; ++k) {
    if (feasible(feasible, universe, k)) return k;
  }
  return elements;
}

void maximal_cliques(const std::vector<Mask>& close, Mask r, Mask p, Mask x, std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  const Mask px = p | x;
  const auto pivot = static_cast<std::size_t>(std::countr_zero(px));
  for (Mask m = p & ~close[pivot]; m; m &= m - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(m));
    maximal_cliques(close, r | bit(v), p & close[v], x & close[v], out);
    p &= ~bit(v);
    x |= bit(v);
  }
}

}  // namespace

std::size_t exact_sep(const OrbitTable& table, std::size_t n, double eps) {
  const auto close = closeness(table, n, eps, kSepOracleCap);
  return IndependentSet(close).solve();
}

std::size_t exact_span(const OrbitTable& table, std::size_t n, double eps) {
  const auto close = closeness(table, n, eps, kCoverOracleCap);
  std::vector<Mask> balls;
  for (std::size_t c = 0; c < close.size(); ++c) balls.push_back(close[c] | bit(c));
  return min_cover(balls, bit(close.size()) - 1, close.size());
}

std::size_t exact_cov(const OrbitTable& table, std::size_t n, double eps) {
  const auto close = closeness(table, n, eps, kCoverOracleCap);
  std::vector<Mask> cliques;
  maximal_cliques(close, 0, bit(close.size()) - 1, 0, cliques);
  return min_cover(cliques, bit(close.size()) - 1, close.size());
}

}  // namespace polyent
