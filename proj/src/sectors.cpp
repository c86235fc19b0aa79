#include "cmspress/sectors.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cmspress/error.hpp"

namespace cmspress {

std::string to_string(SectorTag t) {
  switch (t) {
    case SectorTag::infinite: return "infinite";
    case SectorTag::finite: return "finite";
    case SectorTag::uncertified: return "uncertified";
  }
  return "uncertified";
}

std::string to_string(SectorVerdict v) {
  switch (v) {
    case SectorVerdict::sectorial: return "sectorial";
    case SectorVerdict::not_sectorial: return "not_sectorial";
    case SectorVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0U); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Weak components of the subgraph induced on {lo+1 .. hi}, ordered by least member.
std::vector<std::vector<VertexId>> tail_components(const ShiftSpec& spec, std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return {};
  const auto n = static_cast<std::size_t>(hi - lo);
  UnionFind uf(n);
  for (std::uint64_t u = lo + 1; u <= hi; ++u)
    for (auto v : spec.successors(VertexId{u}, hi))
      if (v.index > lo) uf.unite(static_cast<std::uint32_t>(u - lo - 1), static_cast<std::uint32_t>(v.index - lo - 1));
  std::vector<std::vector<VertexId>> groups;
  std::vector<std::int64_t> slot(n, -1);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto r = uf.find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].emplace_back(lo + 1 + i);
  }
  return groups;
}

SectorTag tag_of(const ShiftSpec& spec, const std::vector<VertexId>& members) {
  bool all_finite = true;
  for (auto v : members) {
    if (spec.ray_step(v)) return SectorTag::infinite;
    all_finite = all_finite && spec.finite_tail_component(v);
  }
  return all_finite ? SectorTag::finite : SectorTag::uncertified;
}

// Raises the cutoff past every certified-finite component.
std::uint64_t absorb_finite(const ShiftSpec& spec, std::uint64_t cutoff, std::uint64_t hi,
                            std::vector<std::vector<VertexId>>& comps) {
  while (true) {
    comps = tail_components(spec, cutoff, hi);
    std::uint64_t raise = cutoff;
    for (const auto& c : comps)
      if (tag_of(spec, c) == SectorTag::finite) raise = std::max(raise, c.back().index);
    if (raise == cutoff) return cutoff;
    cutoff = raise;
  }
}

}  // namespace

std::size_t SectorDecomposition::sector_of(std::size_t level, VertexId v) const {
  const auto& lv = levels.at(level);
  if (v.index <= lv.cutoff) return static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < lv.sectors.size(); ++i) {
    const auto& m = lv.sectors[i].members;
    if (std::binary_search(m.begin(), m.end(), v)) return i;
  }
  return static_cast<std::size_t>(-1);
}

SectorDecomposition decompose(const ShiftSpec& spec, MetricPtr vm, std::vector<std::uint64_t> cutoffs,
                              std::uint64_t n_max) {
  if (!vm) throw ValidationError("decompose: missing metric");
  if (cutoffs.empty()) throw ValidationError("decompose: no cutoffs given");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (i > 0 && cutoffs[i] <= cutoffs[i - 1]) throw ValidationError("decompose: cutoffs must be strictly increasing");
    if (cutoffs[i] >= n_max) throw ValidationError("decompose: cutoffs must be below N_max");
  }
  if (auto size = spec.alphabet_size()) n_max = std::min(n_max, *size);

  SectorDecomposition dec;
  dec.spec = spec;
  dec.metric = vm;
  dec.n_max = n_max;
  std::uint64_t previous = 0;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    SectorLevel lv;
    lv.k = i + 1;
    lv.requested_cutoff = cutoffs[i];
    std::vector<std::vector<VertexId>> comps;
    lv.cutoff = absorb_finite(spec, std::max(cutoffs[i], i == 0 ? 0 : previous + 1), n_max, comps);
    previous = lv.cutoff;
    for (auto& c : comps) {
      Sector s;
      s.tag = tag_of(spec, c);
      s.diameter = vertex_set_diameter(*vm, c);
      s.members = std::move(c);
      lv.delta = std::max(lv.delta, s.diameter);
      lv.sectors.push_back(std::move(s));
    }
    if (i > 0) {
      for (const auto& s : lv.sectors) {
        std::set<std::size_t> ps;
        for (auto v : s.members) ps.insert(dec.sector_of(i - 1, v));
        lv.parents.emplace_back(ps.begin(), ps.end());
      }
    } else {
      lv.parents.assign(lv.sectors.size(), {});
    }
    const auto half = n_max / 2;
    if (half > lv.cutoff) {
      std::vector<std::vector<VertexId>> small;
      absorb_finite(spec, lv.cutoff, half, small);
      lv.count_at_half = small.size();
      dec.count_grows = dec.count_grows || lv.sectors.size() > lv.count_at_half;
    } else {
      lv.count_at_half = lv.sectors.size();
    }
    dec.levels.push_back(std::move(lv));
  }
  return dec;
}

SectorCertificate verify(const SectorDecomposition& dec) {
  SectorCertificate cert;
  const auto& spec = dec.spec;
  const auto fail = [&](std::string witness, json data) {
    cert.verdict = SectorVerdict::not_sectorial;
    cert.witness = std::move(witness);
    cert.witness_data = std::move(data);
    return cert;
  };

  for (std::size_t li = 0; li < dec.levels.size(); ++li) {
    const auto& lv = dec.levels[li];
    // No edge between distinct sectors.
    for (std::uint64_t u = lv.cutoff + 1; u <= dec.n_max; ++u) {
      const auto su = dec.sector_of(li, VertexId{u});
      for (auto v : spec.successors(VertexId{u}, dec.n_max)) {
        if (v.index <= lv.cutoff) continue;
        const auto sv = dec.sector_of(li, v);
        if (su != sv)
          return fail("edge between distinct sectors at level " + std::to_string(lv.k),
                      {{"level", lv.k}, {"edge", {spec.label(VertexId{u}), spec.label(v)}}});
      }
    }
    if (lv.sectors.empty())
      return fail("every component above N_" + std::to_string(lv.k) + "=" + std::to_string(lv.requested_cutoff) +
                      " is certified finite, so no infinite sector can contain those vertices",
                  {{"level", lv.k}, {"absorbed_up_to", lv.cutoff}});
    for (std::size_t si = 0; si < lv.sectors.size(); ++si) {
      const auto& s = lv.sectors[si];
      if (s.diameter > lv.delta)
        return fail("sector diameter exceeds delta", {{"level", lv.k}, {"sector", si}, {"diameter", s.diameter}});
      if (li > 0 && lv.parents[si].size() != 1)
        return fail("sector without a unique parent", {{"level", lv.k}, {"sector", si}, {"parents", lv.parents[si]}});
    }
  }

  if (dec.levels.size() >= 2) {
    const auto& first = dec.levels.front();
    const auto& last = dec.levels.back();
    if (first.delta > 0.0 && last.delta >= first.delta) {
      // Exhibit the far pair inside the widest deepest sector.
      const auto widest = std::max_element(last.sectors.begin(), last.sectors.end(),
                                           [](const Sector& a, const Sector& b) { return a.diameter < b.diameter; });
      VertexId a{0}, b{0};
      double best = -1.0;
      const auto& m = widest->members;
      for (std::size_t i = 0; i < m.size() && best < widest->diameter; ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
          const double d = dec.metric->rho(m[i], m[j]);
          if (d > best) {
            best = d;
            a = m[i];
            b = m[j];
          }
        }
      return fail("sector diameters do not shrink: delta stays >= " + std::to_string(first.delta) + " up to N_" +
                      std::to_string(last.k) + "=" + std::to_string(last.cutoff),
                  {{"level", last.k},
                   {"delta_first", first.delta},
                   {"delta_last", last.delta},
                   {"pair", {spec.label(a), spec.label(b)}},
                   {"rho", best}});
    }
  }

  for (const auto& lv : dec.levels)
    for (const auto& s : lv.sectors)
      if (s.tag != SectorTag::infinite) {
        cert.verdict = SectorVerdict::inconclusive;
        cert.witness = "sector at level " + std::to_string(lv.k) + " has no infiniteness certificate";
        return cert;
      }
  for (std::size_t i = 1; i < dec.levels.size(); ++i)
    if (!(dec.levels[i].delta < dec.levels[i - 1].delta)) {
      cert.verdict = SectorVerdict::inconclusive;
      cert.witness = "delta does not decrease between levels " + std::to_string(i) + " and " + std::to_string(i + 1);
      return cert;
    }
  cert.verdict = SectorVerdict::sectorial;
  return cert;
}

std::vector<BoundaryChain> boundary_chains(const SectorDecomposition& dec) {
  const auto cert = verify(dec);
  if (cert.verdict != SectorVerdict::sectorial)
    throw ValidationError("boundary_chains: decomposition is " + to_string(cert.verdict));
  std::vector<BoundaryChain> out;
  const std::size_t depth = dec.levels.size();
  for (std::size_t s = 0; s < dec.levels.back().sectors.size(); ++s) {
    BoundaryChain chain;
    chain.sectors.assign(depth, 0);
    chain.sectors[depth - 1] = s;
    for (std::size_t li = depth - 1; li > 0; --li) chain.sectors[li - 1] = dec.levels[li].parents[chain.sectors[li]][0];
    out.push_back(std::move(chain));
  }
  return out;
}

json to_json(const SectorDecomposition& dec, const SectorCertificate& cert) {
  json levels = json::array();
  for (const auto& lv : dec.levels) {
    json sectors = json::array();
    for (std::size_t i = 0; i < lv.sectors.size(); ++i) {
      const auto& s = lv.sectors[i];
      json js = {{"tag", to_string(s.tag)},
                 {"size", s.members.size()},
                 {"first", dec.spec.label(s.members.front())},
                 {"last", dec.spec.label(s.members.back())},
                 {"diameter", s.diameter}};
      if (s.members.size() <= 16) {
        json labels = json::array();
        for (auto v : s.members) labels.push_back(dec.spec.label(v));
        js["members"] = labels;
      }
      if (!lv.parents[i].empty()) js["parent"] = lv.parents[i].size() == 1 ? json(lv.parents[i][0]) : json(lv.parents[i]);
      sectors.push_back(js);
    }
    levels.push_back({{"k", lv.k},
                      {"requested_cutoff", lv.requested_cutoff},
                      {"cutoff", lv.cutoff},
                      {"delta", lv.delta},
                      {"count_at_half_nmax", lv.count_at_half},
                      {"sectors", sectors}});
  }
  json c = {{"verdict", to_string(cert.verdict)}};
  if (!cert.witness.empty()) c["witness"] = cert.witness;
  if (!cert.witness_data.empty()) c["witness_data"] = cert.witness_data;
  return {{"spec", dec.spec.to_json()},
          {"metric", dec.metric->to_json()},
          {"nmax", dec.n_max},
          {"count_grows_with_nmax", dec.count_grows},
          {"levels", levels},
          {"certificate", c}};
}

}  // namespace cmspress
