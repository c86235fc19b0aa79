#include "cmspress/shift.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <sstream>

#include "cmspress/csr.hpp"
#include "cmspress/error.hpp"

namespace cmspress {

// ---------------------------------------------------------------------------
// Generator defaults

std::vector<VertexId> Generator::successors(VertexId a, std::uint64_t bound) const {
  std::vector<VertexId> out;
  const auto limit = alphabet_size() ? std::min(bound, *alphabet_size()) : bound;
  for (std::uint64_t j = 1; j <= limit; ++j)
    if (allowed(a, VertexId{j})) out.emplace_back(j);
  return out;
}

std::string Generator::label(VertexId v) const { return std::to_string(v.index); }

std::optional<VertexId> Generator::parse_label(std::string_view text) const {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value == 0) return std::nullopt;
  if (alphabet_size() && value > *alphabet_size()) return std::nullopt;
  return VertexId{value};
}

// ---------------------------------------------------------------------------
// Explicit finite specs

namespace {

class ExplicitGenerator final : public Generator {
 public:
  ExplicitGenerator(std::uint64_t n, std::vector<std::pair<std::uint64_t, std::uint64_t>> edges,
                    std::vector<std::string> labels)
      : n_(n), labels_(std::move(labels)), succ_(n) {
    if (!labels_.empty() && labels_.size() != n)
      throw ValidationError("explicit spec: 'labels' must have exactly n entries");
    for (auto [a, b] : edges) {
      if (a < 1 || a > n || b < 1 || b > n)
        throw ValidationError("explicit spec: edge [" + std::to_string(a) + "," + std::to_string(b) +
                              "] outside 1..n");
      succ_[a - 1].emplace_back(b);
    }
    for (auto& row : succ_) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  }

  std::string name() const override { return "explicit"; }
  bool is_explicit() const override { return true; }
  std::optional<std::uint64_t> alphabet_size() const override { return n_; }

  bool allowed(VertexId a, VertexId b) const override {
    if (a.index < 1 || a.index > n_) return false;
    const auto& row = succ_[a.index - 1];
    return std::binary_search(row.begin(), row.end(), b);
  }

  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const override {
    std::vector<VertexId> out;
    if (a.index < 1 || a.index > n_) return out;
    for (auto b : succ_[a.index - 1])
      if (b.index <= bound) out.push_back(b);
    return out;
  }

  std::string label(VertexId v) const override {
    if (!labels_.empty() && v.index >= 1 && v.index <= n_) return labels_[v.index - 1];
    return std::to_string(v.index);
  }

  std::optional<VertexId> parse_label(std::string_view text) const override {
    if (!labels_.empty()) {
      for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == text) return VertexId{i + 1};
      return std::nullopt;
    }
    return Generator::parse_label(text);
  }

  bool finite_tail_component(VertexId) const override { return true; }

  json to_json() const {
    json edges = json::array();
    for (std::uint64_t a = 1; a <= n_; ++a)
      for (auto b : succ_[a - 1]) edges.push_back({a, b.index});
    json j = {{"kind", "explicit"}, {"n", n_}, {"edges", edges}};
    if (!labels_.empty()) j["labels"] = labels_;
    return j;
  }

 private:
  std::uint64_t n_;
  std::vector<std::string> labels_;
  std::vector<std::vector<VertexId>> succ_;
};

}  // namespace

ShiftSpec::ShiftSpec(std::shared_ptr<const Generator> gen) : gen_(std::move(gen)) {
  if (!gen_) throw ValidationError("shift spec: null generator");
}

ShiftSpec ShiftSpec::explicit_finite(std::uint64_t n,
                                     std::vector<std::pair<std::uint64_t, std::uint64_t>> edges,
                                     std::vector<std::string> labels) {
  return ShiftSpec(std::make_shared<ExplicitGenerator>(n, std::move(edges), std::move(labels)));
}

bool ShiftSpec::contains(VertexId v) const {
  if (v.index < 1) return false;
  const auto size = alphabet_size();
  return !size || v.index <= *size;
}

VertexId ShiftSpec::parse_label(std::string_view text) const {
  auto v = gen_->parse_label(text);
  if (!v) throw ValidationError("label '" + std::string(text) + "' is not a symbol of '" + name() + "'");
  return *v;
}

json ShiftSpec::to_json() const {
  if (auto* e = dynamic_cast<const ExplicitGenerator*>(gen_.get())) return e->to_json();
  return {{"kind", "generator"}, {"name", gen_->name()}, {"params", gen_->params()}};
}

ShiftSpec ShiftSpec::from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("shift spec: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("shift spec: missing string field 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "generator") {
    if (!j.contains("name") || !j["name"].is_string())
      throw ValidationError("shift spec: missing string field 'name'");
    const json params = j.value("params", json::object());
    if (!params.is_object()) throw ValidationError("shift spec: field 'params' must be an object");
    return make_generator(j["name"].get<std::string>(), params);
  }
  if (kind == "explicit") {
    if (!j.contains("n") || !is_count(j["n"]) || j["n"].get<std::uint64_t>() == 0)
      throw ValidationError("shift spec: field 'n' must be a positive integer");
    if (!j.contains("edges") || !j["edges"].is_array())
      throw ValidationError("shift spec: missing array field 'edges'");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !is_count(e[0]) || !is_count(e[1]))
        throw ValidationError("shift spec: each entry of 'edges' must be a pair of positive integers");
      edges.emplace_back(e[0].get<std::uint64_t>(), e[1].get<std::uint64_t>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      if (!j["labels"].is_array()) throw ValidationError("shift spec: field 'labels' must be an array");
      for (const auto& l : j["labels"]) {
        if (!l.is_string()) throw ValidationError("shift spec: field 'labels' must hold strings");
        labels.push_back(l.get<std::string>());
      }
    }
    return explicit_finite(j["n"].get<std::uint64_t>(), std::move(edges), std::move(labels));
  }
  throw ValidationError("shift spec: field 'kind' must be 'generator' or 'explicit', got '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Truncations

TruncatedSFT::TruncatedSFT(ShiftSpec spec, std::uint64_t bound, std::vector<VertexId> vertices,
                           std::vector<std::size_t> row_ptr, std::vector<std::uint32_t> cols)
    : spec_(std::move(spec)),
      bound_(bound),
      vertices_(std::move(vertices)),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)) {}

std::optional<std::size_t> TruncatedSFT::local_index(VertexId v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool TruncatedSFT::has_edge(std::size_t from, std::size_t to) const {
  auto row = successors(from);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(to));
}

TruncatedSFT truncate(const ShiftSpec& spec, std::uint64_t bound) {
  if (bound < 1) throw ValidationError("truncate: N must be >= 1");
  const auto limit = spec.alphabet_size() ? std::min(bound, *spec.alphabet_size()) : bound;
  if (limit > kMaxTruncation)
    throw ValidationError("truncate: N = " + std::to_string(limit) + " exceeds " + std::to_string(kMaxTruncation));
  const auto n = static_cast<std::size_t>(limit);

  std::vector<std::vector<std::uint32_t>> succ(n), pred(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (auto w : spec.successors(VertexId{u + 1}, limit)) {
      const auto v = static_cast<std::uint32_t>(w.index - 1);
      succ[u].push_back(v);
      pred[v].push_back(static_cast<std::uint32_t>(u));
    }
  }

  // Prune to the maximal subshift: drop vertices without in- or out-edges.
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> out_deg(n), in_deg(n);
  std::deque<std::uint32_t> queue;
  for (std::size_t u = 0; u < n; ++u) {
    out_deg[u] = succ[u].size();
    in_deg[u] = pred[u].size();
    if (out_deg[u] == 0 || in_deg[u] == 0) {
      alive[u] = 0;
      queue.push_back(static_cast<std::uint32_t>(u));
    }
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : succ[u]) {
      if (alive[v] && --in_deg[v] == 0) {
        alive[v] = 0;
        queue.push_back(v);
      }
    }
    for (auto v : pred[u]) {
      if (alive[v] && --out_deg[v] == 0) {
        alive[v] = 0;
        queue.push_back(v);
      }
    }
  }

  std::vector<std::uint32_t> local(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<VertexId> vertices;
  for (std::size_t u = 0; u < n; ++u) {
    if (!alive[u]) continue;
    local[u] = static_cast<std::uint32_t>(vertices.size());
    vertices.emplace_back(u + 1);
  }
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  for (std::size_t u = 0; u < n; ++u) {
    if (!alive[u]) continue;
    for (auto v : succ[u])
      if (alive[v]) cols.push_back(local[v]);
    std::sort(cols.begin() + static_cast<std::ptrdiff_t>(row_ptr.back()), cols.end());
    row_ptr.push_back(cols.size());
  }
  return TruncatedSFT(spec, bound, std::move(vertices), std::move(row_ptr), std::move(cols));
}

ShiftSpec as_spec(const TruncatedSFT& t) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::size_t u = 0; u < t.size(); ++u)
    for (auto v : t.successors(u)) edges.emplace_back(t.vertex(u).index, t.vertex(v).index);
  const auto n = std::max<std::uint64_t>(1, t.empty() ? 1 : t.vertices().back().index);
  std::vector<std::string> names;
  names.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) names.push_back(t.spec().label(VertexId{i}));
  return ShiftSpec::explicit_finite(n, std::move(edges), std::move(names));
}

bool is_admissible(const ShiftSpec& spec, std::span<const VertexId> word) {
  for (auto v : word)
    if (!spec.contains(v)) return false;
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (!spec.allowed(word[i], word[i + 1])) return false;
  return true;
}

namespace {

CsrView view_of(const TruncatedSFT& t) { return {t.row_ptr(), t.cols()}; }

void require_nonempty(const TruncatedSFT& t, const char* what) {
  if (t.empty()) throw ValidationError(std::string(what) + ": empty subshift");
}

}  // namespace

bool is_irreducible(const TruncatedSFT& t) {
  require_nonempty(t, "is_irreducible");
  return strongly_connected_components(view_of(t)).count == 1;
}

bool is_topologically_mixing(const TruncatedSFT& t) {
  require_nonempty(t, "is_topologically_mixing");
  const auto g = view_of(t);
  const auto comps = strongly_connected_components(g);
  if (comps.count != 1) return false;
  return component_period(g, comps, 0) == 1;
}

int mixing_bound(const TruncatedSFT& t) {
  if (t.empty() || !is_topologically_mixing(t))
    throw ValidationError("mixing_bound: subshift is not topologically mixing");
  const auto g = view_of(t);
  const std::size_t n = t.size();
  int worst = 0;
  std::vector<int> dist(n);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < n; ++s) {
    // dist[v] = least number of edges (>= 1) from s to v.
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    for (auto v : g.row(s)) {
      if (dist[v] < 0) {
        dist[v] = 1;
        queue.push_back(v);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      for (auto v : g.row(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (auto d : dist) worst = std::max(worst, d);
  }
  return worst;
}

std::vector<Word> enumerate_words(const TruncatedSFT& t, std::size_t n, std::size_t limit) {
  if (n < 1) throw ValidationError("enumerate_words: n must be >= 1");
  std::vector<Word> out;
  if (t.empty()) return out;
  std::vector<std::uint32_t> path;
  std::vector<std::size_t> cursor;
  auto emit = [&] {
    if (out.size() >= limit) throw ValidationError("enumerate_words: more than " + std::to_string(limit) + " words");
    Word w;
    w.reserve(n);
    for (auto u : path) w.push_back(t.vertex(u));
    out.push_back(std::move(w));
  };
  for (std::uint32_t s = 0; s < t.size(); ++s) {
    path.assign(1, s);
    cursor.assign(1, 0);
    if (n == 1) {
      emit();
      continue;
    }
    while (!path.empty()) {
      const auto row = t.successors(path.back());
      auto& c = cursor.back();
      if (c == row.size()) {
        path.pop_back();
        cursor.pop_back();
        continue;
      }
      const auto next = row[c++];
      if (path.size() + 1 == n) {
        path.push_back(next);
        emit();
        path.pop_back();
      } else {
        path.push_back(next);
        cursor.push_back(0);
      }
    }
  }
  return out;
}

namespace {

bool is_primitive_word(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = w[i] == w[i - d];
    if (repeats) return false;
  }
  return true;
}

}  // namespace

std::vector<PeriodicOrbit> periodic_orbits(const TruncatedSFT& t, std::size_t n,
                                           std::optional<VertexId> base, bool primitive_only) {
  if (n < 1) throw ValidationError("periodic_orbits: n must be >= 1");
  std::vector<PeriodicOrbit> out;
  if (t.empty()) return out;
  std::optional<std::size_t> base_local;
  if (base) {
    base_local = t.local_index(*base);
    if (!base_local) return out;
  }
  std::vector<std::uint32_t> path;
  std::vector<std::size_t> cursor;
  auto try_emit = [&] {
    if (!t.has_edge(path.back(), path.front())) return;
    Word w;
    for (auto u : path) w.push_back(t.vertex(u));
    if (primitive_only && !is_primitive_word(w)) return;
    out.push_back({std::move(w)});
  };
  for (std::uint32_t s = 0; s < t.size(); ++s) {
    if (base_local && s != *base_local) continue;
    path.assign(1, s);
    cursor.assign(1, 0);
    if (n == 1) {
      try_emit();
      continue;
    }
    while (!path.empty()) {
      const auto row = t.successors(path.back());
      auto& c = cursor.back();
      if (c == row.size()) {
        path.pop_back();
        cursor.pop_back();
        continue;
      }
      const auto next = row[c++];
      path.push_back(next);
      if (path.size() == n) {
        try_emit();
        path.pop_back();
      } else {
        cursor.push_back(0);
      }
    }
  }
  return out;
}

std::string format_word(const ShiftSpec& spec, std::span<const VertexId> word) {
  std::ostringstream os;
  for (std::size_t i = 0; i < word.size(); ++i) os << (i ? "," : "") << spec.label(word[i]);
  return os.str();
}

// ---------------------------------------------------------------------------
// Label bijections

namespace labels {

std::uint64_t index_of_integer(std::int64_t z) {
  if (z == 0) return 1;
  if (z > 0) return 2 * static_cast<std::uint64_t>(z);
  return 2 * static_cast<std::uint64_t>(-z) + 1;
}

std::int64_t integer_of_index(std::uint64_t index) {
  if (index <= 1) return 0;
  if (index % 2 == 0) return static_cast<std::int64_t>(index / 2);
  return -static_cast<std::int64_t>((index - 1) / 2);
}

std::string tree_word(std::uint64_t index) {
  if (index < 1) throw ValidationError("tree_word: index must be >= 1");
  int length = 0;
  while ((index >> (length + 1)) != 0) ++length;
  std::string w(static_cast<std::size_t>(length), '1');
  for (int i = 0; i < length; ++i)
    if ((index >> (length - 1 - i)) & 1U) w[static_cast<std::size_t>(i)] = '3';
  return w;
}

std::uint64_t tree_index(std::string_view word) {
  if (word.size() >= 63) throw ValidationError("tree_index: word too long");
  std::uint64_t index = 1;
  for (char c : word) {
    if (c != '1' && c != '3') throw ValidationError("tree_index: symbols must be 1 or 3");
    index = (index << 1) | (c == '3' ? 1U : 0U);
  }
  return index;
}

}  // namespace labels

// ---------------------------------------------------------------------------
// Loop systems

LoopSystemLayout::LoopSystemLayout(std::vector<std::uint64_t> p_values, std::uint64_t tail)
    : p_values_(std::move(p_values)), tail_(tail) {
  if (p(1) > 1) throw ValidationError("loop system: p(1) must be 0 or 1 (a single self-loop at the hub)");
  constexpr std::uint64_t cap = std::uint64_t{1} << 32;
  // starts_[n] for n >= 2; indices 0 and 1 unused.
  starts_ = {0, 0};
  loops_before_ = {0, 0};
  std::uint64_t next = 2;
  std::uint64_t loops = 0;
  for (std::uint64_t n = 2;; ++n) {
    starts_.push_back(next);
    loops_before_.push_back(loops);
    if (n > p_values_.size() && tail_ == 0) {
      finite_count_ = next - 1;
      break;
    }
    next += p(n) * (n - 1);
    loops += p(n);
    if (next > cap) break;
  }
}

std::uint64_t LoopSystemLayout::p(std::uint64_t n) const {
  if (n >= 1 && n <= p_values_.size()) return p_values_[n - 1];
  return tail_;
}

std::optional<LoopSystemLayout::Position> LoopSystemLayout::locate(VertexId v) const {
  if (v.index <= 1) return std::nullopt;
  if (finite_count_ && v.index > *finite_count_) return std::nullopt;
  auto it = std::upper_bound(starts_.begin() + 2, starts_.end(), v.index);
  if (it == starts_.end() && !finite_count_) throw ValidationError("loop system: vertex index beyond 2^32");
  const auto n = static_cast<std::uint64_t>(it - starts_.begin()) - 1;
  const auto offset = v.index - starts_[n];
  Position pos;
  pos.length = n;
  pos.copy = offset / (n - 1) + 1;
  pos.step = offset % (n - 1) + 1;
  pos.loop = loops_before_[n] + pos.copy;
  return pos;
}

VertexId LoopSystemLayout::vertex_at(std::uint64_t length, std::uint64_t copy, std::uint64_t step) const {
  if (length < 2 || length >= starts_.size() || copy < 1 || copy > p(length) || step < 1 || step >= length)
    throw ValidationError("loop system: no such loop vertex");
  return VertexId{starts_[length] + (copy - 1) * (length - 1) + (step - 1)};
}

std::optional<std::uint64_t> LoopSystemLayout::loop_start(std::uint64_t n) const {
  if (n < 2 || n >= starts_.size()) return std::nullopt;
  return starts_[n];
}

}  // namespace cmspress
