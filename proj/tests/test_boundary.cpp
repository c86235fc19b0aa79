#include <doctest.h>

#include <cmath>
#include <set>

#include "cmspress/boundary.hpp"
#include "cmspress/error.hpp"
#include "cmspress/gallery.hpp"

using namespace cmspress;

namespace {

using Edge = std::pair<std::string, std::string>;

struct Edges {
  std::set<Edge> to, from, within;
};

Edges edges(const BoundaryModel& m, const ShiftSpec& spec) {
  Edges e;
  for (const auto& x : m.to_boundary) e.to.emplace(spec.label(x.vertex), m.symbols[x.symbol].id);
  for (const auto& x : m.from_boundary) e.from.emplace(m.symbols[x.symbol].id, spec.label(x.vertex));
  for (const auto& x : m.within_boundary) e.within.emplace(m.symbols[x.from].id, m.symbols[x.to].id);
  return e;
}

CompactifiedShift compactified(const std::string& name, std::uint64_t n) {
  const auto e = instantiate(name);
  return compactify(truncate(e.spec, n), e.boundary);
}

}  // namespace

TEST_CASE("renewal family boundary models") {
  const auto renewal = instantiate("renewal");
  auto e = edges(renewal.boundary, renewal.spec);
  CHECK(e.to == std::set<Edge>{{"1", "inf"}});
  CHECK(e.from.empty());
  CHECK(e.within == std::set<Edge>{{"inf", "inf"}});

  const auto back = instantiate("backwards_renewal");
  e = edges(back.boundary, back.spec);
  CHECK(e.to.empty());
  CHECK(e.from == std::set<Edge>{{"inf", "1"}});
  CHECK(e.within == std::set<Edge>{{"inf", "inf"}});

  const auto walk = instantiate("random_walk_1side");
  e = edges(walk.boundary, walk.spec);
  CHECK(e.to.empty());
  CHECK(e.from.empty());
  CHECK(e.within == std::set<Edge>{{"inf", "inf"}});
}

TEST_CASE("excursion checks") {
  for (const auto& name : {"renewal", "backwards_renewal", "random_walk_1side"}) {
    const auto cs = compactified(name, 16);
    CHECK(check_no_excursion(cs, 5).pass);
  }
  auto corrupt = instantiate("renewal");
  corrupt.boundary.from_boundary.push_back({0, VertexId{1}, Provenance::analytic});
  const auto cs = compactify(truncate(corrupt.spec, 16), corrupt.boundary);
  const auto v = check_no_excursion(cs, 5);
  CHECK_FALSE(v.pass);
  CHECK(v.witness == std::vector<std::string>{"1", "inf", "1"});
  CHECK_FALSE(lemma_checks(cs, true).passed());
}

TEST_CASE("compactified graph extends the base") {
  const auto cs = compactified("renewal", 8);
  CHECK(cs.merged.size() == cs.base_size() + 1);
  for (std::size_t u = 0; u < cs.base_size(); ++u) {
    std::vector<std::uint32_t> base_succ(cs.base.successors(u).begin(), cs.base.successors(u).end());
    std::vector<std::uint32_t> merged;
    for (auto v : cs.merged.view().row(u))
      if (v < cs.base_size()) merged.push_back(v);
    CHECK(merged == base_succ);
  }
  CHECK(cs.names.back() == "inf");
  const auto s = cs.symbol_state(0);
  CHECK(cs.merged.view().row(s).size() == 1);
}

TEST_CASE("boundary entropies") {
  for (const auto& name : {"renewal", "backwards_renewal", "random_walk_1side", "double_renewal", "dyadic_tree"})
    CHECK(boundary_entropy(instantiate(name).boundary) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(boundary_entropy(instantiate("birth_death_parity").boundary) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(boundary_entropy(instantiate("zigzag_3").boundary)) < 1e-12);
  BoundaryModel empty;
  CHECK_THROWS_AS(boundary_entropy(empty), ValidationError);
  BoundaryModel acyclic;
  const auto a = acyclic.add_symbol("a", SymbolSource::declared);
  const auto b = acyclic.add_symbol("b", SymbolSource::declared);
  acyclic.within_boundary.push_back({a, b, Provenance::analytic});
  CHECK(std::isinf(boundary_entropy(acyclic)));
}

TEST_CASE("structural lemmas hold on every gallery model") {
  for (const auto& name : gallery_names()) {
    const auto e = instantiate(name);
    const auto cs = compactify(truncate(e.spec, 64), e.boundary);
    const auto checks = lemma_checks(cs, e.sectorial);
    CAPTURE(name);
    CHECK(checks.no_excursion.pass);
    CHECK(checks.within_nonempty);
    if (e.sectorial) CHECK(checks.within_identity == std::optional<bool>{true});
    CHECK(checks.passed());
  }
}

TEST_CASE("cycles through the boundary stay on the boundary") {
  for (const auto& name : gallery_names()) {
    const auto cs = compactified(name, 32);
    const auto n = cs.merged.size();
    // reach[i][j]: j reachable from i in >= 1 step.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> stack;
      for (auto v : cs.merged.view().row(i)) stack.push_back(v);
      while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (reach[i][v]) continue;
        reach[i][v] = true;
        for (auto w : cs.merged.view().row(v)) stack.push_back(w);
      }
    }
    CAPTURE(name);
    for (std::size_t s = cs.base_size(); s < n; ++s)
      for (std::size_t v = 0; v < cs.base_size(); ++v) CHECK_FALSE((reach[s][v] && reach[v][s]));
  }
}

TEST_CASE("finite entropy probe") {
  for (const auto& name : gallery_names()) {
    CAPTURE(name);
    CHECK(finite_entropy_probe(instantiate(name).spec, 256).passed);
  }
  // Infinitely many fixed points next to vertex 1: each n > 1 has 1 -> n -> 1 and n -> n.
  const auto many = ShiftSpec::explicit_finite(300, [] {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t n = 1; n <= 300; ++n) {
      e.emplace_back(1, n);
      e.emplace_back(n, 1);
    }
    return e;
  }());
  const auto probe = finite_entropy_probe(many, 256);
  CHECK_FALSE(probe.passed);
  CHECK(probe.diagnostic.find("period 2") != std::string::npos);
}

TEST_CASE("model JSON round-trip") {
  for (const auto& name : gallery_names()) {
    const auto e = instantiate(name);
    const auto j = e.boundary.to_json(e.spec);
    CHECK(BoundaryModel::from_json(j, e.spec).to_json(e.spec) == j);
  }
  const auto spec = make_generator("renewal");
  CHECK_THROWS_AS(BoundaryModel::from_json(json{{"symbols", json::array()}}, spec), ValidationError);
  const json bad = {{"symbols", {{{"id", "inf"}}}},
                    {"to_boundary", {{{"vertex", "1"}, {"symbol", "nope"}}}},
                    {"from_boundary", json::array()},
                    {"within_boundary", json::array()}};
  CHECK_THROWS_AS(BoundaryModel::from_json(bad, spec), ValidationError);
}

TEST_CASE("heuristic sector mode reproduces the renewal family") {
  for (const auto& name : {"renewal", "backwards_renewal", "random_walk_1side"}) {
    const auto e = instantiate(name);
    const auto dec = decompose(e.spec, e.metric, e.cutoffs, e.n_max);
    const auto h = build_boundary_model_heuristic(dec);
    REQUIRE(h.symbols.size() == 1);
    const auto got = edges(h, e.spec);
    const auto want = edges(e.boundary, e.spec);
    const auto rename = [&](std::set<Edge> s) {
      std::set<Edge> out;
      for (auto [a, b] : s) out.emplace(a == "inf" ? h.symbols[0].id : a, b == "inf" ? h.symbols[0].id : b);
      return out;
    };
    CAPTURE(name);
    CHECK(got.to == rename(want.to));
    CHECK(got.from == rename(want.from));
    CHECK(got.within == rename(want.within));
    for (const auto& x : h.within_boundary) CHECK(x.provenance == Provenance::heuristic);
  }
}

TEST_CASE("heuristic mode finds both infinities of the double renewal") {
  const auto e = instantiate("double_renewal");
  const auto h = build_boundary_model_heuristic(decompose(e.spec, e.metric, e.cutoffs, e.n_max));
  CHECK(h.symbols.size() == 2);
  CHECK(h.within_is_identity());
  CHECK(h.to_boundary.size() == 2);
  CHECK(h.from_boundary.empty());
}

TEST_CASE("vanishing mode") {
  const auto e = instantiate("renewal");
  const std::vector<double> eps{0.5};
  const auto cls = classify(*e.metric, 256, eps);
  const auto m = build_boundary_model(e.spec, cls, 256);
  CHECK(m.to_json(e.spec) == e.boundary.to_json(e.spec));
  const auto disc = classify(*discrete_metric(), 64, eps);
  CHECK_THROWS_AS(build_boundary_model(e.spec, disc, 256), ValidationError);
}
