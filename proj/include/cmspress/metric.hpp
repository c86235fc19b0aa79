#pragma once

// Vertex metrics rho, their classification, and the induced shift metric
// d(x, y) = sum_n theta^n rho(x_n, y_n).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmspress/shift.hpp"

namespace cmspress {

enum class Verdict { yes, no, inconclusive };
std::string to_string(Verdict v);

class VertexMetric {
 public:
  virtual ~VertexMetric() = default;

  virtual std::string family() const = 0;
  virtual json to_json() const { return {{"family", family()}}; }

  /// Value in [0, 1]. Throws ValidationError outside the family's domain.
  virtual double rho(VertexId a, VertexId b) const = 0;

  /// Vertices the metric is defined on, when finite.
  virtual std::optional<std::uint64_t> domain_size() const { return std::nullopt; }

  /// Certificate for vanishing type: sup_{i,j >= n} rho(i, j) <= bound(n) -> 0.
  virtual std::optional<double> vanishing_bound(std::uint64_t) const { return std::nullopt; }

  /// Certificate against vanishing type: sup_{i,j >= n} rho(i, j) >= floor > 0 for every n.
  virtual std::optional<double> separation_floor() const { return std::nullopt; }

  virtual std::optional<bool> totally_bounded() const { return std::nullopt; }

  /// Generators whose labelling the family is written for; empty means any.
  virtual std::vector<std::string> compatible_generators() const { return {}; }
};

using MetricPtr = std::shared_ptr<const VertexMetric>;

MetricPtr make_metric(const json& j);
MetricPtr zargaryan_metric();
MetricPtr discrete_metric();

/// Throws ValidationError when the metric family does not fit the spec.
void check_compatible(const VertexMetric& vm, const ShiftSpec& spec);

struct NetProbe {
  double eps = 0.0;
  std::uint64_t n = 0;
  std::size_t size = 0;
};

struct MetricClassification {
  Verdict vanishing = Verdict::inconclusive;
  std::string vanishing_witness;
  std::vector<std::pair<std::uint64_t, double>> tail_sup;  // (n, sup_{n <= i,j <= N_max} rho)
  Verdict totally_bounded = Verdict::inconclusive;
  std::vector<NetProbe> nets;
};

MetricClassification classify(const VertexMetric& vm, std::uint64_t n_max, std::span<const double> eps_grid);

/// Greedy first-fit eps-net over {1..n}: a vertex becomes a centre unless it is
/// within eps of an existing centre. Returns net sizes after each checkpoint.
std::vector<std::size_t> greedy_net_sizes(const VertexMetric& vm, double eps,
                                          std::span<const std::uint64_t> checkpoints);

class ShiftMetric {
 public:
  ShiftMetric(MetricPtr vm, double theta);
  const VertexMetric& vertex_metric() const { return *vm_; }
  const MetricPtr& vertex_metric_ptr() const { return vm_; }
  double theta() const { return theta_; }

 private:
  MetricPtr vm_;
  double theta_;
};

struct DistanceBound {
  double value = 0.0;
  double tail_bound = 0.0;  // true distance lies in [value, value + tail_bound]
};

DistanceBound shift_distance(const ShiftMetric& sm, std::span<const VertexId> x, std::span<const VertexId> y,
                             std::size_t n);

double vertex_set_diameter(const VertexMetric& vm, std::span<const VertexId> s);

}  // namespace cmspress
