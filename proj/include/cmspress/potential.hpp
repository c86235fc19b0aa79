#pragma once

// Potentials on a shift space: locally constant tables, formulas in the first
// symbol, and affine combinations. All of them depend on finitely many
// coordinates, so evaluation on a long enough word is exact.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmspress/shift.hpp"

namespace cmspress {

struct EvalResult {
  double value = 0.0;
  double uncertainty = 0.0;
};

class Potential {
 public:
  enum class Kind { constant, locally_constant, vertex_formula, affine };

  Potential();  // the zero potential

  static Potential constant(double c);
  /// Table keyed by comma-joined labels of the first `depth` symbols.
  static Potential locally_constant(int depth, std::map<std::string, double> table, double default_value = 0.0,
                                    std::map<std::string, double> limits = {});
  /// name: reciprocal (1/z, 0 at z = 0), sign, parity (|z| mod 2), indicator
  /// (args {"vertex": label}), constant (args {"value": c}). z is the integer label.
  static Potential vertex_formula(const std::string& name, const json& args = json::object(),
                                  std::map<std::string, double> limits = {});
  static Potential affine(std::vector<std::pair<double, Potential>> terms, double constant = 0.0);

  Kind kind() const;
  /// Number of leading symbols the value depends on (0 for constants).
  int depth() const;
  double sup_norm() const;
  bool is_constant() const { return kind() == Kind::constant; }

  EvalResult eval(std::span<const VertexId> w, const ShiftSpec& spec) const;
  double value(std::span<const VertexId> w, const ShiftSpec& spec) const { return eval(w, spec).value; }

  /// Value on a boundary symbol, when declared (constants are defined everywhere).
  std::optional<double> boundary_limit(const std::string& symbol) const;
  std::map<std::string, double> declared_limits() const;

  /// (phi - c, c) with c the constant part of an affine combination.
  std::pair<Potential, double> split_constant() const;

  json to_json() const;
  static Potential from_json(const json& j);

  friend Potential operator+(const Potential& a, const Potential& b);
  friend Potential operator-(const Potential& a, const Potential& b);
  friend Potential operator*(double s, const Potential& p);
  Potential plus(double c) const;

  struct Node;

 private:
  explicit Potential(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Sum over every start position at which the depth window fits.
double birkhoff_sum(const Potential& p, std::span<const VertexId> w, const ShiftSpec& spec);
/// Cyclic reading: exactly period() terms.
double birkhoff_sum(const Potential& p, const PeriodicOrbit& orbit, const ShiftSpec& spec);

/// V_n: sup over n-cylinders of t (n leading symbols fixed) of the oscillation.
/// n = 0 gives the oscillation over the whole of t.
double variation(const Potential& p, std::size_t n, const TruncatedSFT& t);

/// Locally constant potential of depth min(n, depth(p)) agreeing with p at the
/// lexicographically least extension of every cylinder of t.
Potential discretize(const Potential& p, std::size_t n, const TruncatedSFT& t);

std::string word_key(std::span<const VertexId> w, const ShiftSpec& spec);

}  // namespace cmspress
