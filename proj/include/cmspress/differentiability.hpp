#pragma once

// Numeric probes of the pressure functional along lines phi + t psi.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cmspress/potential.hpp"
#include "cmspress/shift.hpp"

namespace cmspress {

struct PressureCurve {
  Potential phi, psi;
  std::vector<double> grid;
  std::vector<double> values;  // sft_pressure(t, phi + grid[i] psi)
  json backend = json::object();

  /// Central second differences (P[i+1] - 2P[i] + P[i-1]) / s^2; NaN at the ends.
  std::vector<double> second_differences() const;
};

/// grid must be strictly increasing. Points are evaluated concurrently when threads are enabled.
PressureCurve pressure_curve(const TruncatedSFT& t, const Potential& phi, const Potential& psi,
                             const std::vector<double>& grid);

/// Evenly spaced grid lo, lo + step, ..., hi (hi included when it lies on the lattice).
std::vector<double> uniform_grid(double lo, double hi, double step);

struct OneSided {
  double left = 0.0;
  double right = 0.0;
};

OneSided gateaux_derivative(const TruncatedSFT& t, const Potential& phi, const Potential& psi, double h);

struct Kink {
  double location = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
};

struct KinkReport {
  std::vector<Kink> kinks;
};

/// Flags grid points whose fourth-order forward slope exceeds the backward
/// slope by more than tol and whose second difference exceeds tol * step.
/// Adjacent flagged points form one kink, located where the outer tangent
/// lines cross. Requires a uniform grid.
KinkReport kink_scan(const PressureCurve& c, double tol);

/// Table over the admissible depth-words of t with values uniform in [lo, hi].
Potential random_locally_constant(const TruncatedSFT& t, int depth, std::mt19937_64& rng, double lo = -2.0,
                                  double hi = 2.0);

struct AxiomReport {
  std::size_t trials = 0;
  std::size_t translation_failures = 0;
  std::size_t monotonicity_failures = 0;
  std::size_t lipschitz_failures = 0;
  std::size_t convexity_failures = 0;
  double worst_translation = 0.0;  // |P(phi + c) - P(phi) - c|
  double worst_monotonicity = 0.0;  // max(P(phi) - P(phi + delta), 0) with delta >= 0
  double worst_lipschitz = 0.0;     // max(|P(phi) - P(psi)| - ||phi - psi||, 0)
  double worst_convexity = 0.0;     // max(P(mid) - (P(phi) + P(psi)) / 2, 0)
  bool passed() const {
    return translation_failures + monotonicity_failures + lipschitz_failures + convexity_failures == 0;
  }
};

/// Random depth-1 and depth-2 potentials on t; tol applies to every axiom.
AxiomReport check_pressure_axioms(const TruncatedSFT& t, std::size_t trials, double tol, std::uint64_t seed);

/// sup over admissible words of |p - q| on t (exact for locally constant potentials).
double sup_distance(const TruncatedSFT& t, const Potential& p, const Potential& q);

}  // namespace cmspress
