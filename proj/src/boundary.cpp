#include "cmspress/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "cmspress/error.hpp"
#include "cmspress/gallery.hpp"
#include "cmspress/spectral.hpp"

namespace cmspress {

std::string to_string(Provenance p) { return p == Provenance::analytic ? "analytic" : "heuristic"; }

std::string to_string(SymbolSource s) {
  switch (s) {
    case SymbolSource::vanishing_point: return "vanishing_point";
    case SymbolSource::sector_chain: return "sector_chain";
    case SymbolSource::declared: return "declared";
  }
  return "declared";
}

namespace {

Provenance provenance_of(const std::string& s) {
  if (s == "analytic") return Provenance::analytic;
  if (s == "heuristic") return Provenance::heuristic;
  throw ValidationError("boundary model: provenance must be 'analytic' or 'heuristic', got '" + s + "'");
}

SymbolSource source_of(const std::string& s) {
  if (s == "vanishing_point") return SymbolSource::vanishing_point;
  if (s == "sector_chain") return SymbolSource::sector_chain;
  if (s == "declared") return SymbolSource::declared;
  throw ValidationError("boundary model: unknown symbol source '" + s + "'");
}

std::string string_field(const json& j, const char* field, const char* what) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_string())
    throw ValidationError(std::string("boundary model: ") + what + " needs a string field '" + field + "'");
  return j[field].get<std::string>();
}

}  // namespace

std::size_t BoundaryModel::add_symbol(std::string id, SymbolSource source) {
  for (const auto& s : symbols)
    if (s.id == id) throw ValidationError("boundary model: duplicate symbol '" + id + "'");
  symbols.push_back({std::move(id), source});
  return symbols.size() - 1;
}

std::size_t BoundaryModel::symbol_index(const std::string& id) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].id == id) return i;
  throw ValidationError("boundary model: unknown symbol '" + id + "'");
}

bool BoundaryModel::has_within(std::size_t a, std::size_t b) const {
  return std::any_of(within_boundary.begin(), within_boundary.end(),
                     [&](const WithinEdge& e) { return e.from == a && e.to == b; });
}

bool BoundaryModel::within_is_identity() const {
  for (const auto& e : within_boundary)
    if (e.from != e.to) return false;
  for (std::size_t s = 0; s < symbols.size(); ++s)
    if (!has_within(s, s)) return false;
  return true;
}

json BoundaryModel::to_json(const ShiftSpec& spec) const {
  json syms = json::array(), to = json::array(), from = json::array(), within = json::array();
  for (const auto& s : symbols) syms.push_back({{"id", s.id}, {"source", cmspress::to_string(s.source)}});
  for (const auto& e : to_boundary)
    to.push_back({{"vertex", spec.label(e.vertex)}, {"symbol", symbols[e.symbol].id},
                  {"provenance", cmspress::to_string(e.provenance)}});
  for (const auto& e : from_boundary)
    from.push_back({{"symbol", symbols[e.symbol].id}, {"vertex", spec.label(e.vertex)},
                    {"provenance", cmspress::to_string(e.provenance)}});
  for (const auto& e : within_boundary)
    within.push_back({{"from", symbols[e.from].id}, {"to", symbols[e.to].id},
                      {"provenance", cmspress::to_string(e.provenance)}});
  return {{"symbols", syms}, {"to_boundary", to}, {"from_boundary", from}, {"within_boundary", within}};
}

BoundaryModel BoundaryModel::from_json(const json& j, const ShiftSpec& spec) {
  if (!j.is_object()) throw ValidationError("boundary model: expected a JSON object");
  BoundaryModel m;
  const auto array = [&](const char* field) -> const json& {
    if (!j.contains(field) || !j[field].is_array())
      throw ValidationError(std::string("boundary model: missing array field '") + field + "'");
    return j[field];
  };
  for (const auto& s : array("symbols"))
    m.add_symbol(string_field(s, "id", "symbol"), source_of(s.value("source", std::string("declared"))));
  const auto prov = [](const json& e) { return provenance_of(e.value("provenance", std::string("analytic"))); };
  for (const auto& e : array("to_boundary"))
    m.to_boundary.push_back({spec.parse_label(string_field(e, "vertex", "to_boundary edge")),
                             m.symbol_index(string_field(e, "symbol", "to_boundary edge")), prov(e)});
  for (const auto& e : array("from_boundary"))
    m.from_boundary.push_back({m.symbol_index(string_field(e, "symbol", "from_boundary edge")),
                               spec.parse_label(string_field(e, "vertex", "from_boundary edge")), prov(e)});
  for (const auto& e : array("within_boundary"))
    m.within_boundary.push_back({m.symbol_index(string_field(e, "from", "within_boundary edge")),
                                 m.symbol_index(string_field(e, "to", "within_boundary edge")), prov(e)});
  return m;
}

CompactifiedShift compactify(const TruncatedSFT& base, const BoundaryModel& model) {
  CompactifiedShift cs;
  cs.base = base;
  cs.boundary = model;
  const std::size_t n = base.size();
  std::vector<std::vector<std::uint32_t>> succ(n + model.symbols.size());
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : base.successors(u)) succ[u].push_back(v);
    cs.names.push_back(base.spec().label(base.vertex(u)));
  }
  for (const auto& s : model.symbols) cs.names.push_back(s.id);
  for (const auto& e : model.to_boundary)
    if (auto u = base.local_index(e.vertex)) succ[*u].push_back(static_cast<std::uint32_t>(n + e.symbol));
  for (const auto& e : model.from_boundary)
    if (auto v = base.local_index(e.vertex)) succ[n + e.symbol].push_back(static_cast<std::uint32_t>(*v));
  for (const auto& e : model.within_boundary) succ[n + e.from].push_back(static_cast<std::uint32_t>(n + e.to));
  for (auto& row : succ) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  cs.merged = make_csr(succ);
  return cs;
}

ExcursionVerdict check_no_excursion(const CompactifiedShift& cs, std::size_t m_max) {
  if (m_max < 1) throw ValidationError("check_no_excursion: m_max must be >= 1");
  const auto g = cs.merged.view();
  const std::size_t n = cs.base_size();
  const std::size_t total = g.size();
  ExcursionVerdict out;
  std::vector<std::int64_t> parent(total);
  std::vector<std::size_t> depth(total);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(parent.begin(), parent.end(), -2);
    std::deque<std::size_t> queue;
    for (auto b : g.row(i)) {
      if (b >= n && parent[b] == -2) {
        parent[b] = -1;
        depth[b] = 1;
        queue.push_back(b);
      }
    }
    while (!queue.empty()) {
      const auto b = queue.front();
      queue.pop_front();
      for (auto j : g.row(b)) {
        if (j < n) {
          std::vector<std::string> path{cs.names[j]};
          for (std::int64_t at = static_cast<std::int64_t>(b); at >= 0; at = parent[static_cast<std::size_t>(at)])
            path.push_back(cs.names[static_cast<std::size_t>(at)]);
          path.push_back(cs.names[i]);
          std::reverse(path.begin(), path.end());
          out.pass = false;
          out.witness = std::move(path);
          return out;
        }
        if (parent[j] == -2 && depth[b] < m_max) {
          parent[j] = static_cast<std::int64_t>(b);
          depth[j] = depth[b] + 1;
          queue.push_back(j);
        }
      }
    }
  }
  return out;
}

double boundary_entropy(const BoundaryModel& model) {
  if (model.symbols.empty()) throw ValidationError("boundary_entropy: empty boundary");
  std::vector<std::vector<std::uint32_t>> succ(model.symbols.size());
  for (const auto& e : model.within_boundary) succ[e.from].push_back(static_cast<std::uint32_t>(e.to));
  for (auto& row : succ) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  WeightedGraph g;
  g.graph = make_csr(succ);
  g.weight.assign(model.symbols.size(), 0.0);
  try {
    return spectral_pressure(g).value;
  } catch (const ValidationError&) {
    return -std::numeric_limits<double>::infinity();  // nilpotent
  }
}

double boundary_entropy(const CompactifiedShift& cs) { return boundary_entropy(cs.boundary); }

FiniteEntropyProbe finite_entropy_probe(const ShiftSpec& spec, std::uint64_t n_max, std::size_t p_max) {
  // Closed paths of length p through a fixed vertex, counted for the first
  // few vertices of the smaller truncation.
  constexpr std::size_t probes = 16;
  const auto count = [&](const TruncatedSFT& t, const std::vector<VertexId>& at) {
    std::vector<std::vector<double>> traces;
    std::vector<double> x(t.size(), 0.0), y(t.size(), 0.0);
    std::vector<std::uint32_t> live, next;
    for (auto v : at) {
      auto& tr = traces.emplace_back(p_max + 1, 0.0);
      const auto local = t.local_index(v);
      if (!local) continue;
      const auto s = static_cast<std::uint32_t>(*local);
      live.assign(1, s);
      x[s] = 1.0;
      for (std::size_t p = 1; p <= p_max; ++p) {
        next.clear();
        for (auto u : live)
          for (auto w : t.successors(u)) {
            if (y[w] == 0.0) next.push_back(w);
            y[w] += x[u];
          }
        for (auto u : live) x[u] = 0.0;
        tr[p] = y[s];
        for (auto w : next) {
          x[w] = y[w];
          y[w] = 0.0;
        }
        live.swap(next);
      }
      for (auto u : live) x[u] = 0.0;
    }
    return traces;
  };
  const auto big = std::min<std::uint64_t>(n_max, 512);
  const auto half = std::max<std::uint64_t>(1, big / 2);
  const auto small = truncate(spec, half);
  std::vector<VertexId> at(small.vertices().begin(),
                           small.vertices().begin() + static_cast<std::ptrdiff_t>(std::min(probes, small.size())));
  FiniteEntropyProbe out;
  const auto a = count(small, at);
  const auto b = count(truncate(spec, big), at);
  for (std::size_t i = 0; i < at.size(); ++i)
    for (std::size_t p = 1; p <= p_max; ++p) {
      if (a[i][p] != b[i][p]) {
        out.passed = false;
        out.diagnostic = "periodic points of period " + std::to_string(p) + " through " + spec.label(at[i]) +
                         " grow with N (" + std::to_string(a[i][p]) + " at N=" + std::to_string(half) + ", " +
                         std::to_string(b[i][p]) + " at N=" + std::to_string(big) + ")";
        return out;
      }
    }
  return out;
}

BoundaryModel build_boundary_model_heuristic(const SectorDecomposition& dec) {
  if (dec.levels.empty()) throw ValidationError("boundary model: decomposition has no levels");
  const auto& spec = dec.spec;
  const auto& deepest = dec.levels.back();
  const std::size_t depth = dec.levels.size();
  BoundaryModel m;
  const std::uint64_t head = dec.levels.front().cutoff;
  for (std::size_t s = 0; s < deepest.sectors.size(); ++s) {
    // Ancestor at each level, when nesting is unique.
    std::vector<std::size_t> chain(depth, static_cast<std::size_t>(-1));
    chain[depth - 1] = s;
    bool unique = true;
    for (std::size_t li = depth - 1; li > 0 && unique; --li) {
      const auto& ps = dec.levels[li].parents[chain[li]];
      unique = ps.size() == 1;
      if (unique) chain[li - 1] = ps[0];
    }
    const std::size_t sym = m.add_symbol("chain" + std::to_string(s + 1), SymbolSource::sector_chain);
    m.within_boundary.push_back({sym, sym, Provenance::heuristic});
    for (std::uint64_t n = 1; n <= head; ++n) {
      bool into = true, out_of = true;
      for (std::size_t li = 0; li < depth; ++li) {
        if (chain[li] == static_cast<std::size_t>(-1)) continue;
        const auto& members = dec.levels[li].sectors[chain[li]].members;
        bool hit = false;
        for (auto v : spec.successors(VertexId{n}, dec.n_max))
          if (std::binary_search(members.begin(), members.end(), v)) {
            hit = true;
            break;
          }
        into = into && hit;
        bool back = false;
        for (auto u : members)
          if (spec.allowed(u, VertexId{n})) {
            back = true;
            break;
          }
        out_of = out_of && back;
      }
      if (into) m.to_boundary.push_back({VertexId{n}, sym, Provenance::heuristic});
      if (out_of) m.from_boundary.push_back({sym, VertexId{n}, Provenance::heuristic});
    }
  }
  return m;
}

BoundaryModel build_boundary_model(const ShiftSpec& spec, const SectorDecomposition& dec) {
  const auto probe = finite_entropy_probe(spec, dec.n_max);
  if (!probe.passed) throw ValidationError("finite-entropy probe failed: " + probe.diagnostic);
  if (auto analytic = analytic_boundary(spec)) return *analytic;
  return build_boundary_model_heuristic(dec);
}

BoundaryModel build_boundary_model(const ShiftSpec& spec, const MetricClassification& cls, std::uint64_t n_max) {
  if (cls.vanishing != Verdict::yes)
    throw ValidationError("boundary model: the metric is not certified vanishing; use a sector decomposition");
  const auto probe = finite_entropy_probe(spec, n_max);
  if (!probe.passed) throw ValidationError("finite-entropy probe failed: " + probe.diagnostic);
  if (auto analytic = analytic_boundary(spec)) return *analytic;
  BoundaryModel m;
  const auto sym = m.add_symbol("inf", SymbolSource::vanishing_point);
  m.within_boundary.push_back({sym, sym, Provenance::heuristic});
  const std::uint64_t cuts[] = {n_max / 8, n_max / 4, n_max / 2};
  for (std::uint64_t n = 1; n <= n_max / 8; ++n) {
    bool into = true, out_of = true;
    for (auto c : cuts) {
      const auto succ = spec.successors(VertexId{n}, n_max);
      into = into && std::any_of(succ.begin(), succ.end(), [&](VertexId v) { return v.index > c; });
      bool back = false;
      for (std::uint64_t u = c + 1; u <= n_max && !back; ++u) back = spec.allowed(VertexId{u}, VertexId{n});
      out_of = out_of && back;
    }
    if (into) m.to_boundary.push_back({VertexId{n}, sym, Provenance::heuristic});
    if (out_of) m.from_boundary.push_back({sym, VertexId{n}, Provenance::heuristic});
  }
  return m;
}

LemmaChecks lemma_checks(const CompactifiedShift& cs, bool sectorial) {
  LemmaChecks out;
  out.no_excursion = check_no_excursion(cs, cs.boundary.symbols.size() + 2);
  out.within_nonempty = !cs.boundary.within_boundary.empty();
  if (sectorial) out.within_identity = cs.boundary.within_is_identity();
  return out;
}

}  // namespace cmspress
