#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cmspress {

/// Read-only compressed-sparse-row adjacency over local indices 0..n-1.
struct CsrView {
  std::span<const std::size_t> row_ptr;  // size n + 1
  std::span<const std::uint32_t> cols;

  std::size_t size() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
  std::span<const std::uint32_t> row(std::size_t u) const {
    return cols.subspan(row_ptr[u], row_ptr[u + 1] - row_ptr[u]);
  }
};

struct CsrGraph {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;

  CsrView view() const { return {row_ptr, cols}; }
  std::size_t size() const { return row_ptr.size() - 1; }
};

/// Builds CSR from per-vertex successor lists (each list sorted by caller or not).
CsrGraph make_csr(const std::vector<std::vector<std::uint32_t>>& succ);

/// Reversed edges (predecessor lists), sorted.
CsrGraph transpose(CsrView g);

struct Components {
  std::vector<std::uint32_t> component;  // component id per vertex
  std::size_t count = 0;
};

/// Strongly connected components (iterative Tarjan). Ids are assigned in
/// reverse topological order of the condensation.
Components strongly_connected_components(CsrView g);

/// True when the component has at least one edge inside it (a cycle).
bool component_has_cycle(CsrView g, const Components& c, std::uint32_t id);

/// Period (gcd of cycle lengths) of a strongly connected component with a cycle.
std::size_t component_period(CsrView g, const Components& c, std::uint32_t id);

}  // namespace cmspress
