// Named transition rules for the example shifts.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "cmspress/error.hpp"
#include "cmspress/shift.hpp"

namespace cmspress {

namespace {

void reject_params(const std::string& name, const json& params, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ValidationError("generator '" + name + "': unknown parameter '" + key + "'");
  }
}

std::optional<std::uint64_t> parse_positive(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) return std::nullopt;
  return value;
}

// 1 -> everything, i -> i-1.
class Renewal final : public Generator {
 public:
  std::string name() const override { return "renewal"; }
  bool allowed(VertexId a, VertexId b) const override {
    return a.index >= 1 && b.index >= 1 && (a.index == 1 || b.index + 1 == a.index);
  }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index == 1) {
      for (std::uint64_t j = 1; j <= bound; ++j) out.emplace_back(j);
    } else if (a.index > 1 && a.index - 1 <= bound) {
      out.emplace_back(a.index - 1);
    }
    return out;
  }
  std::optional<VertexId> ray_step(VertexId v) const override { return VertexId{v.index + 1}; }
};

// i -> 1, i -> i+1.
class BackwardsRenewal final : public Generator {
 public:
  std::string name() const override { return "backwards_renewal"; }
  bool allowed(VertexId a, VertexId b) const override {
    return a.index >= 1 && (b.index == 1 || b.index == a.index + 1);
  }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1) return out;
    if (bound >= 1) out.emplace_back(1);
    if (a.index + 1 <= bound && a.index + 1 != 1) out.emplace_back(a.index + 1);
    return out;
  }
  std::optional<VertexId> ray_step(VertexId v) const override { return VertexId{v.index + 1}; }
};

// 1 -> {1,2}, i -> {i-1, i+1}.
class RandomWalk final : public Generator {
 public:
  std::string name() const override { return "random_walk_1side"; }
  bool allowed(VertexId a, VertexId b) const override {
    if (a.index < 1 || b.index < 1) return false;
    if (a.index == 1) return b.index <= 2;
    return b.index + 1 == a.index || b.index == a.index + 1;
  }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1) return out;
    if (a.index == 1) {
      for (std::uint64_t j = 1; j <= std::min<std::uint64_t>(2, bound); ++j) out.emplace_back(j);
      return out;
    }
    if (a.index - 1 <= bound) out.emplace_back(a.index - 1);
    if (a.index + 1 <= bound) out.emplace_back(a.index + 1);
    return out;
  }
  std::optional<VertexId> ray_step(VertexId v) const override { return VertexId{v.index + 1}; }
};

// Z-labelled: 0 -> everything, z > 0 -> z-1, z < 0 -> z+1.
class DoubleRenewal final : public Generator {
 public:
  std::string name() const override { return "double_renewal"; }
  bool allowed(VertexId a, VertexId b) const override {
    if (a.index < 1 || b.index < 1) return false;
    const auto z = labels::integer_of_index(a.index);
    const auto w = labels::integer_of_index(b.index);
    if (z == 0) return true;
    return z > 0 ? w == z - 1 : w == z + 1;
  }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1) return out;
    const auto z = labels::integer_of_index(a.index);
    if (z == 0) {
      for (std::uint64_t j = 1; j <= bound; ++j) out.emplace_back(j);
      return out;
    }
    const auto next = labels::index_of_integer(z > 0 ? z - 1 : z + 1);
    if (next <= bound) out.emplace_back(next);
    return out;
  }
  std::string label(VertexId v) const override { return std::to_string(labels::integer_of_index(v.index)); }
  std::optional<VertexId> parse_label(std::string_view text) const override {
    std::int64_t z = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), z);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return VertexId{labels::index_of_integer(z)};
  }
  std::optional<std::int64_t> integer_label(VertexId v) const override {
    return labels::integer_of_index(v.index);
  }
  std::optional<VertexId> ray_step(VertexId v) const override {
    const auto z = labels::integer_of_index(v.index);
    if (z == 0) return std::nullopt;
    return VertexId{labels::index_of_integer(z > 0 ? z + 1 : z - 1)};
  }
};

// Vertices <w2>, w over {1,3}; the root <2> reaches every vertex, any
// other vertex moves to the word with its first symbol dropped.
class DyadicTree final : public Generator {
 public:
  std::string name() const override { return "dyadic_tree"; }
  bool allowed(VertexId a, VertexId b) const override {
    if (a.index < 1 || b.index < 1) return false;
    return a.index == 1 || b.index == parent(a.index);
  }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1) return out;
    if (a.index == 1) {
      for (std::uint64_t j = 1; j <= bound; ++j) out.emplace_back(j);
    } else if (parent(a.index) <= bound) {
      out.emplace_back(parent(a.index));
    }
    return out;
  }
  std::string label(VertexId v) const override { return "<" + labels::tree_word(v.index) + "2>"; }
  std::optional<VertexId> parse_label(std::string_view text) const override {
    if (text.size() < 3 || text.front() != '<' || text.substr(text.size() - 2) != "2>") return std::nullopt;
    const auto word = text.substr(1, text.size() - 3);
    if (word.size() >= 63) return std::nullopt;
    for (char c : word)
      if (c != '1' && c != '3') return std::nullopt;
    return VertexId{labels::tree_index(word)};
  }
  std::optional<std::int64_t> integer_label(VertexId) const override { return std::nullopt; }
  std::optional<VertexId> ray_step(VertexId v) const override {
    // Prepend the symbol 1: a new leading bit 0 below the marker bit.
    if (v.index >= (std::uint64_t{1} << 62)) return std::nullopt;
    int length = 0;
    while ((v.index >> (length + 1)) != 0) ++length;
    return VertexId{(std::uint64_t{1} << (length + 1)) | (v.index & ((std::uint64_t{1} << length) - 1))};
  }

 private:
  // Drop the first (most significant after the marker) symbol.
  static std::uint64_t parent(std::uint64_t index) {
    int length = 0;
    while ((index >> (length + 1)) != 0) ++length;
    if (length == 0) return 1;
    const std::uint64_t rest = index & ((std::uint64_t{1} << (length - 1)) - 1);
    return (std::uint64_t{1} << (length - 1)) | rest;
  }
};

// p(n) loops of length n through the hub; vertex numbering by LoopSystemLayout.
class LoopSystem final : public Generator {
 public:
  LoopSystem(std::string name, LoopSystemLayout layout, json params)
      : name_(std::move(name)), layout_(std::move(layout)), params_(std::move(params)) {}

  std::string name() const override { return name_; }
  json params() const override { return params_; }
  std::optional<std::uint64_t> alphabet_size() const override { return layout_.vertex_count(); }

  bool allowed(VertexId a, VertexId b) const override {
    const auto succ = successors(a, b.index);
    return std::binary_search(succ.begin(), succ.end(), b);
  }

  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1) return out;
    if (a.index == 1) {
      if (layout_.hub_loop() && bound >= 1) out.emplace_back(1);
      for (std::uint64_t n = 2;; ++n) {
        const auto start = layout_.loop_start(n);
        if (!start || *start > bound) break;
        for (std::uint64_t k = 1; k <= layout_.p(n); ++k) {
          const auto v = *start + (k - 1) * (n - 1);
          if (v > bound) break;
          out.emplace_back(v);
        }
      }
      return out;
    }
    const auto pos = layout_.locate(a);
    if (!pos) return out;
    const VertexId next = pos->step + 1 < pos->length ? VertexId{a.index + 1} : VertexId{1};
    if (next.index <= bound) out.push_back(next);
    return out;
  }

  std::string label(VertexId v) const override {
    if (v.index == 1) return "v";
    const auto pos = layout_.locate(v);
    if (!pos) return std::to_string(v.index);
    return "b" + std::to_string(pos->length) + "." + std::to_string(pos->copy) + "." + std::to_string(pos->step);
  }

  std::optional<VertexId> parse_label(std::string_view text) const override {
    if (text == "v") return VertexId{1};
    if (text.size() < 2 || text.front() != 'b') return std::nullopt;
    std::uint64_t parts[3];
    std::string_view rest = text.substr(1);
    for (int i = 0; i < 3; ++i) {
      const auto dot = i < 2 ? rest.find('.') : rest.size();
      if (dot == std::string_view::npos) return std::nullopt;
      auto value = parse_positive(rest.substr(0, dot));
      if (!value) return std::nullopt;
      parts[i] = *value;
      rest = i < 2 ? rest.substr(dot + 1) : std::string_view{};
    }
    try {
      return layout_.vertex_at(parts[0], parts[1], parts[2]);
    } catch (const ValidationError&) {
      return std::nullopt;
    }
  }

  bool finite_tail_component(VertexId v) const override { return v.index > 1; }

  const LoopSystemLayout& layout() const { return layout_; }

 private:
  std::string name_;
  LoopSystemLayout layout_;
  json params_;
};

// Renewal graph read with labels 0, 1, 2, ... (vertex index minus one).
class ZigZag final : public Generator {
 public:
  explicit ZigZag(int curves) : curves_(curves) {}
  std::string name() const override { return curves_ == 2 ? "zigzag_2" : "zigzag_3"; }
  bool allowed(VertexId a, VertexId b) const override { return renewal_.allowed(a, b); }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    return renewal_.successors(a, bound);
  }
  std::string label(VertexId v) const override { return std::to_string(v.index - 1); }
  std::optional<VertexId> parse_label(std::string_view text) const override {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return VertexId{value + 1};
  }
  std::optional<std::int64_t> integer_label(VertexId v) const override {
    return static_cast<std::int64_t>(v.index) - 1;
  }
  std::optional<VertexId> ray_step(VertexId v) const override { return VertexId{v.index + 1}; }

 private:
  int curves_;
  Renewal renewal_;
};

// 1 -> {1,2}, a -> {a-1, a, a+1}.
class BirthDeath final : public Generator {
 public:
  std::string name() const override { return "birth_death_parity"; }
  bool allowed(VertexId a, VertexId b) const override {
    if (a.index < 1 || b.index < 1) return false;
    const auto lo = a.index == 1 ? 1 : a.index - 1;
    return b.index >= lo && b.index <= a.index + 1;
  }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1) return out;
    const auto lo = a.index == 1 ? 1 : a.index - 1;
    for (auto j = lo; j <= std::min(bound, a.index + 1); ++j) out.emplace_back(j);
    return out;
  }
  std::optional<VertexId> ray_step(VertexId v) const override { return VertexId{v.index + 1}; }
};

std::vector<std::uint64_t> read_counts(const std::string& name, const json& value, const char* field) {
  if (!value.is_array()) throw ValidationError("generator '" + name + "': '" + field + "' must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& v : value) {
    if (!is_count(v))
      throw ValidationError("generator '" + name + "': '" + field + "' must hold nonnegative integers");
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

ShiftSpec make_loops(const std::string& name, const json& params) {
  if (name == "circle_loops")
    reject_params(name, params, {"p", "p_tail", "r"});
  else
    reject_params(name, params, {"p", "p_tail"});
  std::vector<std::uint64_t> p = params.contains("p") ? read_counts(name, params["p"], "p")
                                                      : std::vector<std::uint64_t>{1};
  std::uint64_t tail = 1;
  if (params.contains("p_tail")) {
    if (!is_count(params["p_tail"]))
      throw ValidationError("generator '" + name + "': 'p_tail' must be a nonnegative integer");
    tail = params["p_tail"].get<std::uint64_t>();
  }
  json stored = {{"p", p}, {"p_tail", tail}};
  if (name == "circle_loops" && params.contains("r")) {
    if (!params["r"].is_array()) throw ValidationError("generator 'circle_loops': 'r' must be an array");
    double prev = 0.0;
    for (const auto& r : params["r"]) {
      if (!r.is_number() || r.get<double>() <= prev || r.get<double>() >= 1.0)
        throw ValidationError("generator 'circle_loops': 'r' must be strictly increasing in (0,1)");
      prev = r.get<double>();
    }
    stored["r"] = params["r"];
  }
  return ShiftSpec(std::make_shared<LoopSystem>(name, LoopSystemLayout(std::move(p), tail), stored));
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"renewal",      "backwards_renewal", "random_walk_1side", "double_renewal", "dyadic_tree",
          "loop_system",  "circle_loops",      "zigzag_2",          "zigzag_3",       "birth_death_parity"};
}

ShiftSpec make_generator(const std::string& name, const json& params) {
  if (!params.is_object()) throw ValidationError("generator '" + name + "': params must be an object");
  if (name == "loop_system" || name == "circle_loops") return make_loops(name, params);
  reject_params(name, params, {});
  if (name == "renewal") return ShiftSpec(std::make_shared<Renewal>());
  if (name == "backwards_renewal") return ShiftSpec(std::make_shared<BackwardsRenewal>());
  if (name == "random_walk_1side") return ShiftSpec(std::make_shared<RandomWalk>());
  if (name == "double_renewal") return ShiftSpec(std::make_shared<DoubleRenewal>());
  if (name == "dyadic_tree") return ShiftSpec(std::make_shared<DyadicTree>());
  if (name == "zigzag_2") return ShiftSpec(std::make_shared<ZigZag>(2));
  if (name == "zigzag_3") return ShiftSpec(std::make_shared<ZigZag>(3));
  if (name == "birth_death_parity") return ShiftSpec(std::make_shared<BirthDeath>());
  std::string known;
  for (const auto& n : generator_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown generator '" + name + "' (known: " + known + ")");
}

}  // namespace cmspress
