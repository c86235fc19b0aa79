#pragma once

// The example shifts, each with its metric, analytic boundary model and
// expected values.

#include <optional>
#include <string>
#include <vector>

#include "cmspress/boundary.hpp"
#include "cmspress/metric.hpp"
#include "cmspress/shift.hpp"

namespace cmspress {

/// How an expected value is known: a closed-form computation, a value stated
/// in the literature for the example, or a numerical cross-check.
enum class OracleBasis { closed_form, literature, cross_checked };
std::string to_string(OracleBasis b);

struct Oracle {
  std::string quantity;
  json value;
  OracleBasis basis = OracleBasis::closed_form;
};

struct GalleryEntry {
  std::string name;
  ShiftSpec spec;
  MetricPtr metric;
  BoundaryModel boundary;
  std::vector<std::uint64_t> cutoffs;  // default sector cutoffs
  std::uint64_t n_max = 0;             // default working truncation
  std::optional<double> entropy;
  double boundary_entropy = 0.0;
  bool sectorial = false;
  std::optional<bool> interior_rich;
  std::vector<Oracle> oracles;
};

std::vector<std::string> gallery_names();

/// Throws ValidationError listing the catalogue for unknown names.
GalleryEntry instantiate(const std::string& name, const json& params = json::object());

/// The analytic boundary model of a gallery generator, if it has one.
std::optional<BoundaryModel> analytic_boundary(const ShiftSpec& spec);

json to_json(const GalleryEntry& e);

}  // namespace cmspress
