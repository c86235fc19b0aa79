#include "cmspress/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "cmspress/error.hpp"
#include "cmspress/kernels.hpp"

namespace cmspress {

namespace {

constexpr double kRelTol = 1e-12;
constexpr std::size_t kMaxIterations = 100000;
// Power steps before switching to Noda iteration, and the Noda step cap.
constexpr std::size_t kPowerBudget = 2000;
constexpr std::size_t kNodaSteps = 200;
constexpr double kSpread = 1e-150;

struct Bracket {
  double lo = 0.0, hi = 0.0, sum = 0.0;
  bool zero = false;
};

Bracket quotients(std::span<const double> x, std::span<const double> y) {
  Bracket b;
  b.lo = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < x.size(); ++u) {
    b.sum += y[u];
    if (x[u] > 0.0) {
      b.lo = std::min(b.lo, y[u] / x[u]);
      b.hi = std::max(b.hi, y[u] / x[u]);
    } else {
      b.zero = true;
    }
  }
  return b;
}

// Noda iteration: x <- (sigma I - M)^{-1} x with sigma the upper
// Collatz-Wielandt quotient of x. M has edge values `vals` along `view`.
// Returns false when a step loses positivity or fails to factor.
bool noda(const CsrView& view, std::span<const double> vals, std::vector<double>& x, Bracket& b, std::size_t& steps) {
  const auto n = static_cast<Eigen::Index>(x.size());
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t u = 0; u < x.size(); ++u)
    for (std::size_t e = view.row_ptr[u]; e < view.row_ptr[u + 1]; ++e)
      entries.emplace_back(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(view.cols[e]), -vals[e]);
  Eigen::SparseMatrix<double> minus_m(n, n);
  minus_m.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();

  std::vector<double> y(x.size());
  const auto apply = [&] {
    kernels::weighted_row_sums(view, vals, x, y);
    b = quotients(x, y);
  };
  apply();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (std::size_t k = 0; k < kNodaSteps; ++k) {
    if (b.zero) return false;
    if (b.hi - b.lo <= kRelTol * b.sum) return true;
    const Eigen::SparseMatrix<double> m = b.hi * identity + minus_m;
    lu.compute(m);
    if (lu.info() != Eigen::Success) return false;
    const Eigen::VectorXd z = lu.solve(Eigen::Map<const Eigen::VectorXd>(x.data(), n));
    if (lu.info() != Eigen::Success || !z.allFinite() || z.minCoeff() <= 0.0) return false;
    const double norm = z.sum();
    for (Eigen::Index u = 0; u < n; ++u) x[static_cast<std::size_t>(u)] = z[u] / norm;
    ++steps;
    apply();
  }
  return !b.zero && b.hi - b.lo <= kRelTol * b.sum;
}

}  // namespace

WeightedGraph induced(const WeightedGraph& g, const std::vector<std::uint32_t>& states) {
  constexpr auto absent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local(g.size(), absent);
  for (std::uint32_t i = 0; i < states.size(); ++i) local[states[i]] = i;
  WeightedGraph out;
  const auto view = g.graph.view();
  for (auto u : states) {
    for (auto v : view.row(u))
      if (local[v] != absent) out.graph.cols.push_back(local[v]);
    std::sort(out.graph.cols.begin() + static_cast<std::ptrdiff_t>(out.graph.row_ptr.back()), out.graph.cols.end());
    out.graph.row_ptr.push_back(out.graph.cols.size());
    out.weight.push_back(g.weight[u]);
    if (!g.names.empty()) out.names.push_back(g.names[u]);
  }
  return out;
}

PerronVector perron_vector(const WeightedGraph& g, bool left) {
  const std::size_t n = g.size();
  if (n == 0) throw ValidationError("perron_vector: empty graph");
  const auto comps = strongly_connected_components(g.graph.view());
  if (comps.count != 1 || !component_has_cycle(g.graph.view(), comps, 0))
    throw ValidationError("perron_vector: graph is not irreducible");
  const bool periodic = component_period(g.graph.view(), comps, 0) > 1;

  const double wmax = *std::max_element(g.weight.begin(), g.weight.end());
  std::vector<double> scale(n);
  for (std::size_t u = 0; u < n; ++u) scale[u] = std::exp(g.weight[u] - wmax);

  CsrGraph transposed;
  if (left) transposed = transpose(g.graph.view());
  const CsrView view = left ? transposed.view() : g.graph.view();

  // The iteration runs on M = D^-1 K D with K = L (or its transpose) and
  // D = diag(exp(ld)). Whenever the iterate spans more than kSpread, it is
  // absorbed into ld, so steeply decaying Perron vectors never underflow.
  std::vector<double> ld(n, 0.0), vals(view.cols.size());
  const auto rebuild = [&] {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t e = view.row_ptr[r]; e < view.row_ptr[r + 1]; ++e) {
        const std::size_t c = view.cols[e];
        vals[e] = (left ? scale[c] : scale[r]) * std::exp(std::min(ld[c] - ld[r], 700.0));
      }
  };
  rebuild();

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  PerronVector out;
  double lambda = 0.0, lo = 0.0, hi = 0.0, previous = -1.0;
  int stalled = 0;
  for (std::size_t it = 1; it <= kMaxIterations; ++it) {
    kernels::weighted_row_sums(view, vals, x, y);
    const auto q = quotients(x, y);
    lambda = q.sum;
    lo = q.lo;
    hi = q.hi;
    const bool zero = q.zero;
    out.iterations = it;
    if (!zero && hi - lo <= kRelTol * lambda) {
      out.certified = true;
      break;
    }
    if (zero) {
      // Entries underflowed: the bracket only covers the surviving ones.
      stalled = std::abs(lambda - previous) <= 1e-15 * lambda ? stalled + 1 : 0;
      if (stalled >= 20) {
        out.certified = false;
        break;
      }
    }
    if (it == kPowerBudget && !zero) {
      auto trial = x;
      Bracket b;
      std::size_t steps = 0;
      if (noda(view, vals, trial, b, steps)) {
        x = std::move(trial);
        lambda = b.sum;
        lo = b.lo;
        hi = b.hi;
        out.iterations = it + steps;
        out.certified = true;
        break;
      }
    }
    if (it == kMaxIterations) {
      std::ostringstream os;
      os << "power iteration did not converge after " << it << " iterations (states=" << n
         << ", bracket=[" << lo << ", " << hi << "], estimate=" << lambda << ")";
      throw NumericError(os.str());
    }
    previous = lambda;
    double norm = 0.0, top = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      y[u] = periodic ? y[u] + x[u] : y[u];
      norm += y[u];
    }
    double bottom = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < n; ++u) {
      x[u] = y[u] / norm;
      top = std::max(top, x[u]);
      if (x[u] > 0.0) bottom = std::min(bottom, x[u]);
    }
    if (bottom < kSpread * top) {
      for (std::size_t u = 0; u < n; ++u) {
        ld[u] += std::log(x[u] > 0.0 ? x[u] : bottom) - std::log(top);
        x[u] = 1.0 / static_cast<double>(n);
      }
      rebuild();
    }
  }
  out.log_lambda = std::log(lambda) + wmax;
  out.log_lower = std::log(lo) + wmax;
  out.log_upper = std::log(hi) + wmax;
  out.log_vec.resize(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < n; ++u) top = std::max(top, out.log_vec[u] = ld[u] + std::log(x[u]));
  double z = 0.0;
  for (auto v : out.log_vec) z += std::exp(v - top);
  const double log_z = top + std::log(z);
  out.vec.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    out.log_vec[u] -= log_z;
    out.vec[u] = std::exp(out.log_vec[u]);
  }
  return out;
}

PressureEstimate spectral_pressure(const WeightedGraph& g) {
  const auto view = g.graph.view();
  const auto comps = strongly_connected_components(view);
  std::vector<std::vector<std::uint32_t>> members(comps.count);
  for (std::uint32_t u = 0; u < g.size(); ++u) members[comps.component[u]].push_back(u);

  PressureEstimate out;
  out.method = "spectral";
  out.value = out.lower = out.upper = -std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool any = false;
  for (std::uint32_t c = 0; c < comps.count; ++c) {
    if (!component_has_cycle(view, comps, c)) continue;
    any = true;
    PerronVector pv;
    if (comps.count == 1) {
      pv = perron_vector(g);
    } else {
      pv = perron_vector(induced(g, members[c]));
    }
    iterations += pv.iterations;
    out.certified = out.certified && pv.certified;
    out.value = std::max(out.value, pv.log_lambda);
    out.lower = std::max(out.lower, pv.log_lower);
    out.upper = std::max(out.upper, pv.log_upper);
  }
  if (!any) throw ValidationError("empty subshift");
  out.params = {{"states", g.size()}, {"components", comps.count}, {"iterations", iterations}};
  return out;
}

}  // namespace cmspress
