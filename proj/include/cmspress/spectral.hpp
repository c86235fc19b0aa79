#pragma once

// Perron data of weighted finite graphs L_uv = A_uv exp(w_u).

#include <string>
#include <vector>

#include "cmspress/csr.hpp"
#include "cmspress/shift.hpp"

namespace cmspress {

struct WeightedGraph {
  CsrGraph graph;
  std::vector<double> weight;  // log-weight of each state
  std::vector<std::string> names;

  std::size_t size() const { return graph.size(); }
};

struct PressureEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  json params = json::object();
  bool certified = true;  // false when the bracket could not be verified (underflow)
};

struct PerronVector {
  double log_lambda = 0.0;  // log spectral radius of L
  double log_lower = 0.0;
  double log_upper = 0.0;
  std::vector<double> vec;      // nonnegative, sums to 1; far tails may underflow to 0
  std::vector<double> log_vec;  // log of vec, always finite
  std::size_t iterations = 0;
  bool certified = true;
};

/// Power iteration on an irreducible weighted graph. `left` iterates x L
/// instead of L x. Periodic graphs are handled by iterating L + I. The iterate
/// is kept diagonally rebalanced so its entries stay within 1e150 of each
/// other. After 2000
/// steps without a 1e-12 relative Collatz-Wielandt gap it switches to Noda's
/// shifted inverse iteration, and falls back to plain power steps if that
/// loses positivity. Throws NumericError after 1e5 iterations.
PerronVector perron_vector(const WeightedGraph& g, bool left = false);

/// log spectral radius as the maximum over strongly connected components.
/// Throws ValidationError when the graph has no cycle.
PressureEstimate spectral_pressure(const WeightedGraph& g);

/// Restriction to the given states (in the given order).
WeightedGraph induced(const WeightedGraph& g, const std::vector<std::uint32_t>& states);

}  // namespace cmspress
