// Serial reference kernels against the indexed OpenMP kernels on a few
// catalog tables. Prints wall time per kernel and checks the counts agree.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "polyent/catalog.hpp"
#include "polyent/kernels.hpp"

using namespace polyent;

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool bench(const std::string& name, int eps_exponent, std::size_t n, const Rational& mesh_factor) {
  const double eps = std::ldexp(1.0, -eps_exponent);
  NetRequest request;
  request.mesh = Rational(1) / (mpz_class(1) << eps_exponent) * mesh_factor;
  request.mesh.canonicalize();
  request.horizon = n;
  const auto table = table_for_horizon(catalog::system_by_name(name)->orbit_table(request), n);

  std::size_t sep_ref = 0, sep_idx = 0, span_ref = 0, span_idx = 0;
  const double t_sep_ref = seconds([&] { sep_ref = reference::greedy_separated(*table, n, eps).size(); });
  const double t_sep_idx = seconds([&] { sep_idx = greedy_separated(*table, n, eps).size(); });
  const double t_span_ref = seconds([&] { span_ref = reference::greedy_spanning(*table, n, eps); });
  const double t_span_idx = seconds([&] { span_idx = greedy_spanning(*table, n, eps); });

  const bool same = sep_ref == sep_idx && span_ref == span_idx;
  std::printf("%-32s eps=2^-%d n=%-4zu N=%-6zu sep %5zu ref %7.3fs idx %7.3fs | span %5zu ref %7.3fs idx %7.3fs %s\n",
              name.c_str(), eps_exponent, n, table->size(), sep_idx, t_sep_ref, t_sep_idx, span_idx, t_span_ref,
              t_span_idx, same ? "" : "MISMATCH");
  return same;
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  bool ok = true;
  ok = bench("pl_contract", 4, 128, Rational(1, 4)) && ok;
  ok = bench("pl_contract", 5, 64, Rational(1, 4)) && ok;
  ok = bench("tripod_contract", 4, 128, Rational(1, 4)) && ok;
  ok = bench("rotation(golden)", 6, 512, Rational(1, 4)) && ok;
  ok = bench("prod(rotation(golden),pl_contract)", 3, 64, Rational(1, 2)) && ok;
  ok = bench("F2(pl_contract)", 2, 32, Rational(1, 2)) && ok;
  return ok ? 0 : 1;
}
