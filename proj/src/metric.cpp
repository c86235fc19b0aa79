#include "cmspress/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cmspress/error.hpp"
#include "cmspress/kernels.hpp"

namespace cmspress {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

void require_vertex(VertexId v, const char* family) {
  if (v.index < 1) throw ValidationError(std::string(family) + " metric: vertex index must be >= 1");
}

class Zargaryan final : public VertexMetric {
 public:
  std::string family() const override { return "zargaryan"; }
  double rho(VertexId a, VertexId b) const override {
    require_vertex(a, "zargaryan");
    require_vertex(b, "zargaryan");
    if (a == b) return 0.0;
    return std::abs(1.0 / static_cast<double>(a.index) - 1.0 / static_cast<double>(b.index));
  }
  std::optional<double> vanishing_bound(std::uint64_t n) const override {
    return 1.0 / static_cast<double>(std::max<std::uint64_t>(n, 1));
  }
  std::optional<bool> totally_bounded() const override { return true; }
};

class Discrete final : public VertexMetric {
 public:
  std::string family() const override { return "discrete"; }
  double rho(VertexId a, VertexId b) const override {
    require_vertex(a, "discrete");
    require_vertex(b, "discrete");
    return a == b ? 0.0 : 1.0;
  }
  std::optional<double> separation_floor() const override { return 1.0; }
  std::optional<bool> totally_bounded() const override { return false; }
};

int tree_length(std::uint64_t index) {
  int length = 0;
  while ((index >> (length + 1)) != 0) ++length;
  return length;
}

// Words compared from their last symbol; the shorter word is padded in front
// with empty symbols, which differ from every letter.
class TreeBackward final : public VertexMetric {
 public:
  std::string family() const override { return "tree_backward"; }
  double rho(VertexId a, VertexId b) const override {
    require_vertex(a, "tree_backward");
    require_vertex(b, "tree_backward");
    if (a == b) return 0.0;
    const int la = tree_length(a.index);
    const int lb = tree_length(b.index);
    const int shortest = std::min(la, lb);
    int common = 0;
    while (common < shortest && ((a.index >> common) & 1U) == ((b.index >> common) & 1U)) ++common;
    return 1.0 / (1.0 + common);
  }
  std::optional<double> separation_floor() const override { return 1.0; }
  std::optional<bool> totally_bounded() const override { return true; }
  std::vector<std::string> compatible_generators() const override { return {"dyadic_tree"}; }
};

class DoubleRenewalMetric final : public VertexMetric {
 public:
  std::string family() const override { return "double_renewal"; }
  double rho(VertexId a, VertexId b) const override {
    require_vertex(a, "double_renewal");
    require_vertex(b, "double_renewal");
    if (a == b) return 0.0;
    const auto x = labels::integer_of_index(a.index);
    const auto y = labels::integer_of_index(b.index);
    if ((x <= 0 && y >= 0) || (x >= 0 && y <= 0)) return 1.0;
    return std::abs(1.0 / static_cast<double>(x) - 1.0 / static_cast<double>(y));
  }
  std::optional<double> separation_floor() const override { return 1.0; }
  std::optional<bool> totally_bounded() const override { return true; }
  std::vector<std::string> compatible_generators() const override { return {"double_renewal"}; }
};

class BirthDeathMetric final : public VertexMetric {
 public:
  std::string family() const override { return "birth_death_parity"; }
  double rho(VertexId a, VertexId b) const override {
    require_vertex(a, "birth_death_parity");
    require_vertex(b, "birth_death_parity");
    if (a == b) return 0.0;
    const auto gap = a.index > b.index ? a.index - b.index : b.index - a.index;
    if (gap % 2 == 1) return 1.0;
    return std::abs(1.0 / static_cast<double>(a.index) - 1.0 / static_cast<double>(b.index));
  }
  std::optional<double> separation_floor() const override { return 1.0; }
  std::optional<bool> totally_bounded() const override { return true; }
  std::vector<std::string> compatible_generators() const override { return {"birth_death_parity"}; }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Euclidean distance of a planar placement, capped at 1.
class Embedding : public VertexMetric {
 public:
  std::string family() const override { return "embedding"; }
  double rho(VertexId a, VertexId b) const override {
    if (a == b) return 0.0;
    const Point p = place(a);
    const Point q = place(b);
    return std::min(1.0, std::hypot(p.x - q.x, p.y - q.y));
  }
  std::optional<bool> totally_bounded() const override { return true; }
  virtual Point place(VertexId v) const = 0;
};

class PointsEmbedding final : public Embedding {
 public:
  explicit PointsEmbedding(std::vector<Point> points) : points_(std::move(points)) {}
  json to_json() const override {
    json pts = json::array();
    for (auto p : points_) pts.push_back({p.x, p.y});
    return {{"family", "embedding"}, {"points", pts}};
  }
  std::optional<std::uint64_t> domain_size() const override { return points_.size(); }
  Point place(VertexId v) const override {
    if (v.index < 1 || v.index > points_.size())
      throw ValidationError("embedding metric: vertex " + std::to_string(v.index) + " has no point");
    return points_[v.index - 1];
  }

 private:
  std::vector<Point> points_;
};

class ZigZagEmbedding final : public Embedding {
 public:
  explicit ZigZagEmbedding(int curves) : curves_(curves) {}
  json to_json() const override {
    return {{"family", "embedding"}, {"layout", curves_ == 2 ? "zigzag_2" : "zigzag_3"}};
  }
  Point place(VertexId v) const override {
    require_vertex(v, "embedding");
    const auto j = v.index - 1;
    static constexpr std::array<double, 6> pattern{0.0, 1.0, 0.0, 0.5, 1.0, 0.5};
    const double x = curves_ == 2 ? static_cast<double>(j % 2) : pattern[j % 6];
    return {x, -1.0 / (1.0 + static_cast<double>(j))};
  }
  std::optional<double> separation_floor() const override { return 1.0; }
  std::vector<std::string> compatible_generators() const override {
    return {curves_ == 2 ? "zigzag_2" : "zigzag_3"};
  }

 private:
  int curves_;
};

class CircleEmbedding final : public Embedding {
 public:
  CircleEmbedding(std::vector<std::uint64_t> p, std::uint64_t tail, std::vector<double> r)
      : layout_(p, tail), r_(std::move(r)) {}
  json to_json() const override {
    json j = {{"family", "embedding"}, {"layout", "circle"}, {"p", layout_.p_values()}, {"p_tail", layout_.tail()}};
    if (!r_.empty()) j["r"] = r_;
    return j;
  }
  std::optional<std::uint64_t> domain_size() const override { return layout_.vertex_count(); }
  Point place(VertexId v) const override {
    require_vertex(v, "embedding");
    if (v.index == 1) return {0.0, 0.0};
    const auto pos = layout_.locate(v);
    if (!pos) throw ValidationError("embedding metric: vertex " + std::to_string(v.index) + " outside the loop system");
    const double radius = this->radius(pos->loop);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(pos->step - 1) /
                         static_cast<double>(pos->length - 1);
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }
  std::vector<std::string> compatible_generators() const override { return {"loop_system", "circle_loops"}; }

  double radius(std::uint64_t loop) const {
    if (loop <= r_.size()) return r_[loop - 1];
    if (r_.empty()) return 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(loop, 1000)));
    const double last = r_.back();
    const auto extra = std::min<std::uint64_t>(loop - r_.size(), 1000);
    return last + (1.0 - last) * (1.0 - std::ldexp(1.0, -static_cast<int>(extra)));
  }
  const LoopSystemLayout& layout() const { return layout_; }
  const std::vector<double>& radii() const { return r_; }

 private:
  LoopSystemLayout layout_;
  std::vector<double> r_;
};

std::vector<std::uint64_t> counts_of(const json& j, const char* field) {
  if (!j.is_array()) throw ValidationError(std::string("metric spec: '") + field + "' must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& v : j) {
    if (!is_count(v))
      throw ValidationError(std::string("metric spec: '") + field + "' must hold nonnegative integers");
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

}  // namespace

MetricPtr zargaryan_metric() { return std::make_shared<Zargaryan>(); }
MetricPtr discrete_metric() { return std::make_shared<Discrete>(); }

MetricPtr make_metric(const json& j) {
  if (!j.is_object()) throw ValidationError("metric spec: expected a JSON object");
  if (!j.contains("family") || !j["family"].is_string())
    throw ValidationError("metric spec: missing string field 'family'");
  const auto family = j["family"].get<std::string>();
  if (family == "zargaryan") return zargaryan_metric();
  if (family == "discrete") return discrete_metric();
  if (family == "tree_backward") return std::make_shared<TreeBackward>();
  if (family == "double_renewal") return std::make_shared<DoubleRenewalMetric>();
  if (family == "birth_death_parity") return std::make_shared<BirthDeathMetric>();
  if (family == "embedding") {
    if (j.contains("points")) {
      if (!j["points"].is_array() || j["points"].empty())
        throw ValidationError("metric spec: 'points' must be a non-empty array of [x, y] pairs");
      std::vector<Point> pts;
      for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw ValidationError("metric spec: each entry of 'points' must be [x, y]");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return std::make_shared<PointsEmbedding>(std::move(pts));
    }
    if (!j.contains("layout") || !j["layout"].is_string())
      throw ValidationError("metric spec: embedding needs 'points' or a string 'layout'");
    const auto layout = j["layout"].get<std::string>();
    if (layout == "zigzag_2") return std::make_shared<ZigZagEmbedding>(2);
    if (layout == "zigzag_3") return std::make_shared<ZigZagEmbedding>(3);
    if (layout == "circle") {
      auto p = j.contains("p") ? counts_of(j["p"], "p") : std::vector<std::uint64_t>{1};
      std::uint64_t tail = 1;
      if (j.contains("p_tail")) {
        if (!is_count(j["p_tail"]))
          throw ValidationError("metric spec: 'p_tail' must be a nonnegative integer");
        tail = j["p_tail"].get<std::uint64_t>();
      }
      std::vector<double> r;
      if (j.contains("r")) {
        if (!j["r"].is_array()) throw ValidationError("metric spec: 'r' must be an array");
        double prev = 0.0;
        for (const auto& v : j["r"]) {
          if (!v.is_number() || v.get<double>() <= prev || v.get<double>() >= 1.0)
            throw ValidationError("metric spec: 'r' must be strictly increasing in (0,1)");
          prev = v.get<double>();
          r.push_back(prev);
        }
      }
      return std::make_shared<CircleEmbedding>(std::move(p), tail, std::move(r));
    }
    throw ValidationError("metric spec: unknown embedding layout '" + layout + "'");
  }
  throw ValidationError("metric spec: unknown family '" + family +
                        "' (known: zargaryan, discrete, tree_backward, double_renewal, birth_death_parity, embedding)");
}

void check_compatible(const VertexMetric& vm, const ShiftSpec& spec) {
  const auto fits = vm.compatible_generators();
  if (!fits.empty() && std::find(fits.begin(), fits.end(), spec.name()) == fits.end())
    throw ValidationError("metric family '" + vm.family() + "' does not fit shift '" + spec.name() + "'");
  if (auto* circle = dynamic_cast<const CircleEmbedding*>(&vm)) {
    const json params = spec.generator().params();
    if (params.value("p", json::array()) != json(circle->layout().p_values()) ||
        params.value("p_tail", std::uint64_t{0}) != circle->layout().tail())
      throw ValidationError("circle embedding: 'p' and 'p_tail' must match the loop system");
  }
  if (auto size = vm.domain_size()) {
    const auto alphabet = spec.alphabet_size();
    if (!alphabet || *alphabet > *size)
      throw ValidationError("metric defines " + std::to_string(*size) + " points but the shift has more vertices");
  }
}

std::vector<std::size_t> greedy_net_sizes(const VertexMetric& vm, double eps,
                                          std::span<const std::uint64_t> checkpoints) {
  std::vector<std::size_t> sizes;
  std::vector<VertexId> centres;
  std::uint64_t done = 0;
  for (auto stop : checkpoints) {
    for (std::uint64_t v = done + 1; v <= stop; ++v) {
      const VertexId x{v};
      bool covered = false;
      for (auto c : centres) {
        if (vm.rho(x, c) <= eps) {
          covered = true;
          break;
        }
      }
      if (!covered) centres.push_back(x);
    }
    done = std::max(done, stop);
    sizes.push_back(centres.size());
  }
  return sizes;
}

MetricClassification classify(const VertexMetric& vm, std::uint64_t n_max, std::span<const double> eps_grid) {
  if (n_max < 2) throw ValidationError("classify: N_max must be >= 2");
  if (auto size = vm.domain_size()) n_max = std::min(n_max, *size);
  MetricClassification out;

  // s(n) = sup over n <= i, j <= N_max, built from row maxima.
  const auto n = static_cast<std::size_t>(n_max);
  std::vector<double> row_max(n + 2, 0.0);
  kernels::for_each_index(n, [&](std::size_t i) {
    double m = 0.0;
    for (std::size_t j = i + 2; j <= n; ++j) m = std::max(m, vm.rho(VertexId{i + 1}, VertexId{j}));
    row_max[i + 1] = m;
  });
  std::vector<double> s(n + 2, 0.0);
  for (std::size_t i = n; i >= 1; --i) s[i] = std::max(s[i + 1], row_max[i]);
  for (std::size_t i = 1; i <= n; i *= 2) out.tail_sup.emplace_back(i, s[i]);
  if (n / 2 >= 1) out.tail_sup.emplace_back(n / 2, s[n / 2]);
  std::sort(out.tail_sup.begin(), out.tail_sup.end());
  out.tail_sup.erase(std::unique(out.tail_sup.begin(), out.tail_sup.end()), out.tail_sup.end());

  const auto fmt = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::string(buf);
  };

  if (vm.vanishing_bound(1)) {
    std::size_t bad = 0;
    for (std::size_t i = 1; i <= n && !bad; ++i)
      if (s[i] > *vm.vanishing_bound(i) + 1e-12) bad = i;
    if (bad) {
      out.vanishing = Verdict::inconclusive;
      out.vanishing_witness = "certificate bound violated at n=" + std::to_string(bad);
    } else {
      out.vanishing = Verdict::yes;
      out.vanishing_witness = "sup_{i,j>=n} rho <= " + fmt(*vm.vanishing_bound(1)) + "/n (checked for n <= " +
                              std::to_string(n) + ")";
    }
  } else if (auto floor = vm.separation_floor()) {
    const std::size_t probe = std::max<std::size_t>(1, n / 2);
    bool holds = true;
    for (std::size_t i = 1; i <= probe; ++i) holds = holds && s[i] >= *floor - 1e-12;
    out.vanishing = holds ? Verdict::no : Verdict::inconclusive;
    out.vanishing_witness = "sup_{i,j>=n} rho >= " + fmt(*floor) + " for every n; observed s(" +
                            std::to_string(probe) + ")=" + fmt(s[probe]);
  } else {
    out.vanishing = Verdict::inconclusive;
    out.vanishing_witness = "no certificate; s(" + std::to_string(std::max<std::size_t>(1, n / 4)) +
                            ")=" + fmt(s[std::max<std::size_t>(1, n / 4)]) + ", s(" +
                            std::to_string(std::max<std::size_t>(1, n / 2)) + ")=" +
                            fmt(s[std::max<std::size_t>(1, n / 2)]);
  }

  std::vector<std::uint64_t> checkpoints{std::max<std::uint64_t>(1, n_max / 4), std::max<std::uint64_t>(1, n_max / 2),
                                         n_max};
  bool stable = true;
  for (double eps : eps_grid) {
    const auto sizes = greedy_net_sizes(vm, eps, checkpoints);
    for (std::size_t i = 0; i < sizes.size(); ++i) out.nets.push_back({eps, checkpoints[i], sizes[i]});
    stable = stable && sizes[1] == sizes[2];
  }
  if (auto cert = vm.totally_bounded())
    out.totally_bounded = *cert ? Verdict::yes : Verdict::no;
  else
    out.totally_bounded = stable && !eps_grid.empty() ? Verdict::yes : Verdict::inconclusive;

  if (out.vanishing == Verdict::yes) {
    if (out.totally_bounded == Verdict::no)
      throw Error("classify: family certificates contradict (vanishing but not totally bounded)");
    out.totally_bounded = Verdict::yes;
  }
  return out;
}

ShiftMetric::ShiftMetric(MetricPtr vm, double theta) : vm_(std::move(vm)), theta_(theta) {
  if (!vm_) throw ValidationError("shift metric: missing vertex metric");
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("shift metric: theta must lie in (0,1)");
}

DistanceBound shift_distance(const ShiftMetric& sm, std::span<const VertexId> x, std::span<const VertexId> y,
                             std::size_t n) {
  if (x.size() < n || y.size() < n)
    throw ValidationError("shift_distance: words shorter than N=" + std::to_string(n));
  DistanceBound out;
  double weight = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.value += weight * sm.vertex_metric().rho(x[i], y[i]);
    weight *= sm.theta();
  }
  out.tail_bound = weight / (1.0 - sm.theta());
  return out;
}

double vertex_set_diameter(const VertexMetric& vm, std::span<const VertexId> s) {
  if (s.empty()) throw ValidationError("vertex_set_diameter: empty set");
  return kernels::pairwise_max(s.size(), [&](std::size_t i, std::size_t j) { return vm.rho(s[i], s[j]); });
}

}  // namespace cmspress
