#pragma once

// Boundary symbols of a metric compactification, their transitions to,
// from and within the boundary, and the compactified finite shift.

#include <optional>
#include <string>
#include <vector>

#include "cmspress/csr.hpp"
#include "cmspress/metric.hpp"
#include "cmspress/sectors.hpp"
#include "cmspress/shift.hpp"

namespace cmspress {

enum class Provenance { analytic, heuristic };
enum class SymbolSource { vanishing_point, sector_chain, declared };
std::string to_string(Provenance p);
std::string to_string(SymbolSource s);

struct BoundarySymbol {
  std::string id;
  SymbolSource source = SymbolSource::declared;
};

struct BoundaryModel {
  struct ToEdge {
    VertexId vertex;
    std::size_t symbol = 0;
    Provenance provenance = Provenance::analytic;
  };
  struct FromEdge {
    std::size_t symbol = 0;
    VertexId vertex;
    Provenance provenance = Provenance::analytic;
  };
  struct WithinEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    Provenance provenance = Provenance::analytic;
  };

  std::vector<BoundarySymbol> symbols;
  std::vector<ToEdge> to_boundary;
  std::vector<FromEdge> from_boundary;
  std::vector<WithinEdge> within_boundary;

  std::size_t add_symbol(std::string id, SymbolSource source);
  std::size_t symbol_index(const std::string& id) const;  // throws ValidationError if unknown
  bool has_within(std::size_t a, std::size_t b) const;
  /// within_boundary equals the identity relation on the symbols.
  bool within_is_identity() const;

  json to_json(const ShiftSpec& spec) const;
  static BoundaryModel from_json(const json& j, const ShiftSpec& spec);
};

struct CompactifiedShift {
  TruncatedSFT base;
  BoundaryModel boundary;
  CsrGraph merged;                 // base states 0..base.size()-1, then one state per symbol
  std::vector<std::string> names;  // labels of base vertices, then symbol ids

  std::size_t base_size() const { return base.size(); }
  std::size_t symbol_state(std::size_t symbol) const { return base.size() + symbol; }
};

CompactifiedShift compactify(const TruncatedSFT& base, const BoundaryModel& model);

struct ExcursionVerdict {
  bool pass = true;
  std::vector<std::string> witness;  // i, b_1, ..., b_m, j
};

/// Searches paths i -> b_1 -> ... -> b_m -> j with i, j base vertices, the
/// b's boundary symbols and m <= m_max.
ExcursionVerdict check_no_excursion(const CompactifiedShift& cs, std::size_t m_max);

/// log spectral radius of the within-boundary graph (-inf when it has no cycle).
double boundary_entropy(const BoundaryModel& model);
double boundary_entropy(const CompactifiedShift& cs);

struct FiniteEntropyProbe {
  bool passed = true;
  std::string diagnostic;
};

/// Periodic-point counts through each of the first few vertices, per period
/// p <= p_max, must agree at N_max / 2 and N_max.
FiniteEntropyProbe finite_entropy_probe(const ShiftSpec& spec, std::uint64_t n_max, std::size_t p_max = 4);

/// Analytic model from the generator's certificate when one exists,
/// otherwise heuristic inference from the decomposition.
BoundaryModel build_boundary_model(const ShiftSpec& spec, const SectorDecomposition& dec);
BoundaryModel build_boundary_model_heuristic(const SectorDecomposition& dec);
/// Vanishing-type metrics: a single symbol "inf" with probed edges.
BoundaryModel build_boundary_model(const ShiftSpec& spec, const MetricClassification& cls, std::uint64_t n_max);

struct LemmaChecks {
  ExcursionVerdict no_excursion;
  bool within_nonempty = false;
  std::optional<bool> within_identity;  // only evaluated for sectorial models
  bool passed() const {
    return no_excursion.pass && within_nonempty && within_identity.value_or(true);
  }
};

LemmaChecks lemma_checks(const CompactifiedShift& cs, bool sectorial);

}  // namespace cmspress
