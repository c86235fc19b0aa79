#pragma once

// Data-parallel kernels. Each has a serial reference and an OpenMP variant;
// both visit every row in the same order so their outputs are bitwise equal.

#include <cstddef>
#include <functional>
#include <span>

#include "cmspress/csr.hpp"

namespace cmspress::kernels {

/// Thread count used by the dispatching entry points (default 1).
void set_threads(int n);
int threads();

/// y[u] = sum over successors v of u of x[v].
void row_sums_serial(CsrView g, std::span<const double> x, std::span<double> y);
void row_sums_omp(CsrView g, std::span<const double> x, std::span<double> y);
void row_sums(CsrView g, std::span<const double> x, std::span<double> y);

/// y[u] = sum over edges e = (u, v) of w[e] x[v]; w is aligned with g.cols.
void weighted_row_sums_serial(CsrView g, std::span<const double> w, std::span<const double> x, std::span<double> y);
void weighted_row_sums_omp(CsrView g, std::span<const double> w, std::span<const double> x, std::span<double> y);
void weighted_row_sums(CsrView g, std::span<const double> w, std::span<const double> x, std::span<double> y);

/// max over 0 <= i < j < n of dist(i, j); 0 when n < 2.
double pairwise_max_serial(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist);
double pairwise_max_omp(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist);
double pairwise_max(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist);

/// Runs body(i) for i in [0, n). Iterations must be independent. Exceptions
/// thrown by the body are rethrown on the calling thread (first by index).
void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& body);
void for_each_index_omp(std::size_t n, const std::function<void(std::size_t)>& body);
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cmspress::kernels
