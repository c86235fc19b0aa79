#include "cmspress/kernels.hpp"

#include <algorithm>
#include <exception>
#include <vector>

#include <omp.h>

#include "cmspress/error.hpp"

namespace cmspress::kernels {

namespace {
int g_threads = 1;

// Below this many rows the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelRows = 4096;
}  // namespace

void set_threads(int n) {
  if (n < 1) throw ValidationError("threads must be >= 1");
  g_threads = n;
}

int threads() { return g_threads; }

void row_sums_serial(CsrView g, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.size();
  for (std::size_t u = 0; u < n; ++u) {
    double s = 0.0;
    for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) s += x[g.cols[e]];
    y[u] = s;
  }
}

void row_sums_omp(CsrView g, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static) num_threads(g_threads)
  for (std::ptrdiff_t u = 0; u < n; ++u) {
    double s = 0.0;
    for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) s += x[g.cols[e]];
    y[u] = s;
  }
}

void row_sums(CsrView g, std::span<const double> x, std::span<double> y) {
  if (g_threads > 1 && g.size() >= kParallelRows)
    row_sums_omp(g, x, y);
  else
    row_sums_serial(g, x, y);
}

void weighted_row_sums_serial(CsrView g, std::span<const double> w, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.size();
  for (std::size_t u = 0; u < n; ++u) {
    double s = 0.0;
    for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) s += w[e] * x[g.cols[e]];
    y[u] = s;
  }
}

void weighted_row_sums_omp(CsrView g, std::span<const double> w, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static) num_threads(g_threads)
  for (std::ptrdiff_t u = 0; u < n; ++u) {
    double s = 0.0;
    for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) s += w[e] * x[g.cols[e]];
    y[u] = s;
  }
}

void weighted_row_sums(CsrView g, std::span<const double> w, std::span<const double> x, std::span<double> y) {
  if (g_threads > 1 && g.size() >= kParallelRows)
    weighted_row_sums_omp(g, w, x, y);
  else
    weighted_row_sums_serial(g, w, x, y);
}

double pairwise_max_serial(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, dist(i, j));
  return best;
}

double pairwise_max_omp(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist) {
  double best = 0.0;
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best) num_threads(g_threads)
  for (std::ptrdiff_t i = 0; i < rows; ++i)
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j)
      best = std::max(best, dist(static_cast<std::size_t>(i), j));
  return best;
}

double pairwise_max(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist) {
  if (g_threads > 1 && n >= 256) return pairwise_max_omp(n, dist);
  return pairwise_max_serial(n, dist);
}

void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

void for_each_index_omp(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(g_threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (g_threads > 1 && n > 1)
    for_each_index_omp(n, body);
  else
    for_each_index_serial(n, body);
}

}  // namespace cmspress::kernels
