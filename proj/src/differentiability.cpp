#include "cmspress/differentiability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmspress/error.hpp"
#include "cmspress/kernels.hpp"
#include "cmspress/pressure.hpp"

namespace cmspress {

namespace {

Potential line(const Potential& phi, const Potential& psi, double t) { return Potential::affine({{1.0, phi}, {t, psi}}); }

double pressure(const TruncatedSFT& t, const Potential& p) { return sft_pressure(t, p).value; }

}  // namespace

std::vector<double> PressureCurve::second_differences() const {
  const std::size_t n = values.size();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = 0.5 * (grid[i + 1] - grid[i - 1]);
    out[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (s * s);
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("grid: need lo <= hi and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw ValidationError("grid: more than 1e6 points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

PressureCurve pressure_curve(const TruncatedSFT& t, const Potential& phi, const Potential& psi,
                             const std::vector<double>& grid) {
  if (grid.empty()) throw ValidationError("pressure_curve: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("pressure_curve: grid must be strictly increasing");
  PressureCurve c;
  c.phi = phi;
  c.psi = psi;
  c.grid = grid;
  c.values.resize(grid.size());
  kernels::for_each_index(grid.size(), [&](std::size_t i) { c.values[i] = pressure(t, line(phi, psi, grid[i])); });
  c.backend = {{"method", "spectral"}, {"N", t.bound()}};
  return c;
}

OneSided gateaux_derivative(const TruncatedSFT& t, const Potential& phi, const Potential& psi, double h) {
  if (!(h > 0.0)) throw ValidationError("gateaux_derivative: h must be > 0");
  const double p0 = pressure(t, phi);
  const double plus = pressure(t, line(phi, psi, h));
  const double minus = pressure(t, line(phi, psi, -h));
  return {(p0 - minus) / h, (plus - p0) / h};
}

KinkReport kink_scan(const PressureCurve& c, double tol) {
  const std::size_t n = c.grid.size();
  KinkReport out;
  if (n < 5) return out;
  const double s = (c.grid.back() - c.grid.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(c.grid[i] - c.grid[i - 1] - s) > 1e-9 * std::max(1.0, std::abs(s)))
      throw ValidationError("kink_scan: grid spacing is not uniform");
  const auto& f = c.values;
  // Fourth-order one-sided first derivatives.
  const auto forward = [&](std::size_t i) {
    return (-25 * f[i] + 48 * f[i + 1] - 36 * f[i + 2] + 16 * f[i + 3] - 3 * f[i + 4]) / (12 * s);
  };
  const auto backward = [&](std::size_t i) {
    return (25 * f[i] - 48 * f[i - 1] + 36 * f[i - 2] - 16 * f[i - 3] + 3 * f[i - 4]) / (12 * s);
  };
  std::vector<bool> flagged(n, false);
  std::vector<double> d2(n, 0.0);
  for (std::size_t i = 4; i + 4 < n; ++i) {
    d2[i] = f[i + 1] - 2 * f[i] + f[i - 1];
    flagged[i] = forward(i) - backward(i) > tol;
  }
  for (std::size_t i = 0; i < n;) {
    if (!flagged[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool curved = false;
    while (j < n && flagged[j]) curved = curved || d2[j++] > tol * s;
    const std::size_t l = i, r = j - 1;
    i = j;
    if (!curved) continue;
    const double sl = backward(l), sr = forward(r);
    if (!(sr - sl > tol)) continue;
    const double tl = c.grid[l], tr = c.grid[r];
    const double at = (f[r] - f[l] + sl * tl - sr * tr) / (sl - sr);
    out.kinks.push_back({std::clamp(at, tl - s, tr + s) + 0.0, sl, sr});  // + 0.0 drops a negative zero
  }
  return out;
}

Potential random_locally_constant(const TruncatedSFT& t, int depth, std::mt19937_64& rng, double lo, double hi) {
  if (depth < 1) throw ValidationError("random_locally_constant: depth must be >= 1");
  std::uniform_real_distribution<double> u(lo, hi);
  std::map<std::string, double> table;
  for (const auto& w : enumerate_words(t, static_cast<std::size_t>(depth))) table[word_key(w, t.spec())] = u(rng);
  return Potential::locally_constant(depth, std::move(table), 0.0);
}

double sup_distance(const TruncatedSFT& t, const Potential& p, const Potential& q) {
  const auto d = static_cast<std::size_t>(std::max({p.depth(), q.depth(), 1}));
  double best = 0.0;
  for (const auto& w : enumerate_words(t, d))
    best = std::max(best, std::abs(p.value(w, t.spec()) - q.value(w, t.spec())));
  return best;
}

AxiomReport check_pressure_axioms(const TruncatedSFT& t, std::size_t trials, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> depth(1, 2);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  AxiomReport r;
  const auto note = [&](double excess, std::size_t& failures, double& worst) {
    worst = std::max(worst, excess);
    if (excess > tol) ++failures;
  };
  for (std::size_t k = 0; k < trials; ++k) {
    const auto phi = random_locally_constant(t, depth(rng), rng);
    const auto psi = random_locally_constant(t, depth(rng), rng);
    const auto delta = random_locally_constant(t, depth(rng), rng, 0.0, 1.0);
    const double c = shift(rng);
    const double pp = pressure(t, phi);
    const double pq = pressure(t, psi);

    note(std::abs(pressure(t, phi.plus(c)) - pp - c), r.translation_failures, r.worst_translation);
    note(std::max(0.0, pp - pressure(t, phi + delta)), r.monotonicity_failures, r.worst_monotonicity);
    note(std::max(0.0, std::abs(pp - pq) - sup_distance(t, phi, psi)), r.lipschitz_failures, r.worst_lipschitz);
    const auto mid = Potential::affine({{0.5, phi}, {0.5, psi}});
    note(std::max(0.0, pressure(t, mid) - 0.5 * (pp + pq)), r.convexity_failures, r.worst_convexity);
    ++r.trials;
  }
  return r;
}

}  // namespace cmspress
