#pragma once

// Pressure of finite truncations and their limits, equilibrium and sampled
// Markov measures, and periodic orbits approximating boundary measures.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cmspress/boundary.hpp"
#include "cmspress/metric.hpp"
#include "cmspress/potential.hpp"
#include "cmspress/sectors.hpp"
#include "cmspress/shift.hpp"
#include "cmspress/spectral.hpp"

namespace cmspress {

/// The m-block presentation of a truncation on which a depth-m potential is
/// a weight on states. States are admissible m-words (single vertices when m <= 1).
struct Recoded {
  WeightedGraph graph;
  std::vector<Word> states;
  int depth = 1;
  double constant = 0.0;  // constant part split off the potential, not included in weights
};

Recoded recode(const TruncatedSFT& t, const Potential& p);

/// log spectral radius of the recoded weighted matrix plus the constant part.
/// p must be locally constant on t (depth <= any finite value works, it is exact).
PressureEstimate sft_pressure(const TruncatedSFT& t, const Potential& p);

struct InteriorRow {
  std::uint64_t n = 0;
  double value = 0.0;  // running maximum up to this N
  double lower = 0.0;
  double upper = 0.0;
  double increment = 0.0;
  bool empty = false;  // truncation at this N is empty
};

struct InteriorReport {
  PressureEstimate estimate;  // final row
  std::vector<InteriorRow> rows;
};

/// sup over the schedule of sft_pressure(truncate(spec, N), p). Truncations
/// are evaluated concurrently when threads are enabled.
InteriorReport interior_pressure(const ShiftSpec& spec, const Potential& p, const std::vector<std::uint64_t>& schedule);

/// g_n = (1/n) log of the weighted count of closed n-words through `base`
/// using symbols <= n_symbols, for n <= n_max; value = max g_n.
struct GurevichReport {
  PressureEstimate estimate;
  std::vector<double> g;  // g[n-1]; -inf when no closed word of that length
};
GurevichReport gurevich_pressure(const ShiftSpec& spec, const Potential& p, VertexId base, std::size_t n_max,
                                 std::uint64_t n_symbols);

/// log(1/z) for the root z in (0,1] of sum_{n <= cutoff} p(n) z^n = 1.
double loop_entropy(const std::vector<std::uint64_t>& p_seq, std::size_t cutoff);

/// (1/n) log Q_n for the (n, eps)-separated family obtained by collapsing
/// the vertices into rho <= eps clusters and keeping the heaviest word per
/// collapsed n-word. A certified lower bound for the separated-set sum.
PressureEstimate separated_set_pressure(const TruncatedSFT& t, const Potential& p, const ShiftMetric& sm,
                                        std::size_t n, double eps);

/// Pressure of base truncation plus boundary symbols, with p's declared
/// limits on the symbols. p must have depth <= 1.
PressureEstimate compactified_pressure(const CompactifiedShift& cs, const Potential& p);

struct MarkovMeasure {
  std::vector<Word> states;
  CsrGraph graph;                         // allowed transitions between states
  std::vector<std::vector<double>> prob;  // prob[u][k] for the k-th successor of u
  std::vector<double> pi;
  int depth = 1;

  /// Throws ValidationError unless rows sum to 1 (1e-12), pi P = pi (1e-10)
  /// and pi is a probability vector.
  void validate() const;
};

struct EquilibriumData {
  MarkovMeasure measure;
  double pressure = 0.0;
  std::vector<double> left, right;  // Perron vectors, each summing to 1
};

/// Throws ValidationError unless t is topologically mixing.
EquilibriumData equilibrium_measure(const TruncatedSFT& t, const Potential& p);

struct FreeEnergy {
  double entropy = 0.0;
  double integral = 0.0;
  double total() const { return entropy + integral; }
};

/// p is read on the measure's states (m-words); its depth must not exceed m.
FreeEnergy measure_free_energy(const MarkovMeasure& m, const Potential& p, const ShiftSpec& spec);

/// Dirichlet(1, ..., 1) rows on the recoded graph of (t, p), stationary by linear solve.
MarkovMeasure sample_markov_measure(const Recoded& r, std::uint64_t seed);

struct VariationalReport {
  double pressure = 0.0;
  double max_sampled = -std::numeric_limits<double>::infinity();
  double worst_excess = -std::numeric_limits<double>::infinity();  // max over samples of F - P
  double equilibrium_free_energy = 0.0;
  std::size_t samples = 0;
  bool samples_below = true;
  bool equilibrium_attains = true;
  bool passed() const { return samples_below && equilibrium_attains; }
};

/// Requires an irreducible truncation; the Perron measure is used even when
/// the period exceeds 1.
VariationalReport variational_witness_check(const TruncatedSFT& t, const Potential& p, std::size_t samples,
                                            std::uint64_t seed);

struct EquidistributionResult {
  Word orbit;  // closing transition orbit.back() -> orbit.front()
  std::size_t sector_iterates = 0;
  std::size_t head_iterates = 0;
  int mixing_bound = 0;  // M_k of the head truncation
  double integral = 0.0;  // Birkhoff average along the orbit
  double limit = 0.0;     // p's value at the boundary symbol
  double eps_k = 0.0;     // sup over the sector of |p - limit|
  double bound = 0.0;     // eps_k + (M_k + 2) / n * sup|p|
  double deviation = 0.0;
  bool bound_holds = false;
};

/// Periodic orbit with n consecutive iterates in the level-k sector of the
/// chain and at most M_k + 2 iterates in {1..N_k}. p must have depth <= 1
/// and declare its value at `symbol`.
EquidistributionResult boundary_equidistribution(const ShiftSpec& spec, const SectorDecomposition& dec,
                                                 const BoundaryChain& chain, std::size_t k, std::size_t n,
                                                 const Potential& p, const std::string& symbol);

}  // namespace cmspress
