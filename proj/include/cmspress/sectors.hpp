#pragma once

// Sector decompositions: at each level the vertices above a cutoff N_k split
// into weakly connected components; each should be infinite, of small
// diameter, and nested in a component of the previous level.

#include <cstdint>
#include <string>
#include <vector>

#include "cmspress/metric.hpp"
#include "cmspress/shift.hpp"

namespace cmspress {

enum class SectorTag { infinite, finite, uncertified };
std::string to_string(SectorTag t);

struct Sector {
  std::vector<VertexId> members;  // sorted, restricted to {N_k+1 .. N_max}
  SectorTag tag = SectorTag::uncertified;
  double diameter = 0.0;
};

struct SectorLevel {
  std::size_t k = 0;                 // 1-based level index
  std::uint64_t requested_cutoff = 0;
  std::uint64_t cutoff = 0;          // N_k after absorbing finite components
  double delta = 0.0;                // largest sector diameter
  std::vector<Sector> sectors;
  std::vector<std::vector<std::size_t>> parents;  // per sector: intersected sectors of level k-1
  std::size_t count_at_half = 0;     // sector count with working truncation N_max / 2
};

struct SectorDecomposition {
  ShiftSpec spec;
  MetricPtr metric;
  std::uint64_t n_max = 0;
  std::vector<SectorLevel> levels;
  bool count_grows = false;  // sector counts increase with the working truncation

  std::size_t sector_of(std::size_t level, VertexId v) const;  // npos when v is in the head
};

enum class SectorVerdict { sectorial, not_sectorial, inconclusive };
std::string to_string(SectorVerdict v);

struct SectorCertificate {
  SectorVerdict verdict = SectorVerdict::inconclusive;
  std::string witness;
  json witness_data = json::object();
};

SectorDecomposition decompose(const ShiftSpec& spec, MetricPtr vm, std::vector<std::uint64_t> cutoffs,
                              std::uint64_t n_max);

SectorCertificate verify(const SectorDecomposition& dec);

struct BoundaryChain {
  std::vector<std::size_t> sectors;  // sector index per level
};

/// One chain per sector of the deepest level. Throws ValidationError unless
/// the decomposition verifies as sectorial.
std::vector<BoundaryChain> boundary_chains(const SectorDecomposition& dec);

json to_json(const SectorDecomposition& dec, const SectorCertificate& cert);

}  // namespace cmspress
