// Serial vs OpenMP timings for the data-parallel kernels and a pressure curve.
// Usage: cmspress_bench [threads]. Exits 1 if any pair of outputs differs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "cmspress/differentiability.hpp"
#include "cmspress/kernels.hpp"
#include "cmspress/metric.hpp"

using namespace cmspress;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool all_equal = true;

void row(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              equal ? "equal" : "MISMATCH");
  all_equal = all_equal && equal;
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  kernels::set_threads(threads);
  std::printf("threads=%d\n%-28s %10s %10s %9s\n", threads, "kernel", "serial s", "omp s", "speedup");

  std::mt19937_64 rng(1);
  const std::size_t n = 2'000'000;
  std::uniform_int_distribution<std::uint32_t> to(0, static_cast<std::uint32_t>(n - 1));
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (auto& s : succ)
    for (int k = 0; k < 8; ++k) s.push_back(to(rng));
  const auto g = make_csr(succ);
  std::vector<double> x(n, 1.0), a(n), b(n);
  for (auto& v : x) v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double rs = best_of(5, [&] { kernels::row_sums_serial(g.view(), x, a); });
  const double ro = best_of(5, [&] { kernels::row_sums_omp(g.view(), x, b); });
  row("row_sums (2e6 x 8)", rs, ro, a == b);

  std::vector<double> w(g.cols.size());
  for (auto& v : w) v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double ws = best_of(5, [&] { kernels::weighted_row_sums_serial(g.view(), w, x, a); });
  const double wo = best_of(5, [&] { kernels::weighted_row_sums_omp(g.view(), w, x, b); });
  row("weighted_row_sums (2e6 x 8)", ws, wo, a == b);

  const auto vm = zargaryan_metric();
  const std::size_t m = 4000;
  const auto dist = [&](std::size_t i, std::size_t j) { return vm->rho(VertexId{i + 1}, VertexId{j + 1}); };
  double ps = 0.0, po = 0.0;
  const double ts = best_of(3, [&] { ps = kernels::pairwise_max_serial(m, dist); });
  const double to_ = best_of(3, [&] { po = kernels::pairwise_max_omp(m, dist); });
  row("pairwise_max (4000 pts)", ts, to_, ps == po);

  const auto t = truncate(make_generator("renewal"), 512);
  const auto phi = Potential::vertex_formula("reciprocal");
  const auto psi = Potential::vertex_formula("parity");
  const auto grid = uniform_grid(-1.0, 1.0, 0.02);
  PressureCurve cs, co;
  kernels::set_threads(1);
  const double cs_t = best_of(1, [&] { cs = pressure_curve(t, phi, psi, grid); });
  kernels::set_threads(threads);
  const double co_t = best_of(1, [&] { co = pressure_curve(t, phi, psi, grid); });
  row("pressure_curve (renewal 512)", cs_t, co_t, cs.values == co.values);
  return all_equal ? 0 : 1;
}
