#include <doctest.h>

#include "cmspress/error.hpp"
#include "cmspress/shift.hpp"
#include "oracles.hpp"

using namespace cmspress;

namespace {

std::vector<std::uint64_t> indices(const TruncatedSFT& t) {
  std::vector<std::uint64_t> out;
  for (auto v : t.vertices()) out.push_back(v.index);
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> edges(const TruncatedSFT& t) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t u = 0; u < t.size(); ++u)
    for (auto v : t.successors(u)) out.emplace_back(t.vertex(u).index, t.vertex(v).index);
  return out;
}

ShiftSpec full2() { return ShiftSpec::explicit_finite(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}}); }
ShiftSpec cycle2() { return ShiftSpec::explicit_finite(2, {{1, 2}, {2, 1}}); }

Word word(std::initializer_list<std::uint64_t> xs) {
  Word w;
  for (auto x : xs) w.emplace_back(x);
  return w;
}

}  // namespace

TEST_CASE("renewal truncation at N=3") {
  const auto t = truncate(make_generator("renewal"), 3);
  CHECK(indices(t) == std::vector<std::uint64_t>{1, 2, 3});
  using E = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
  CHECK(edges(t) == E{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {3, 2}});
}

TEST_CASE("one-sided random walk at N=1 keeps the loop") {
  const auto t = truncate(make_generator("random_walk_1side"), 1);
  CHECK(indices(t) == std::vector<std::uint64_t>{1});
  CHECK(t.has_edge(0, 0));
}

TEST_CASE("acyclic graphs prune to the empty truncation") {
  const auto spec = ShiftSpec::explicit_finite(3, {{1, 2}, {2, 3}});
  const auto t = truncate(spec, 3);
  CHECK(t.empty());
  CHECK_THROWS_AS(is_topologically_mixing(t), ValidationError);
  CHECK(enumerate_words(t, 2).empty());
}

TEST_CASE("pruning agrees with the dense oracle on every gallery generator") {
  for (const auto& name : generator_names()) {
    const auto spec = make_generator(name);
    for (std::uint64_t n : {1, 2, 5, 12, 20}) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(indices(truncate(spec, n)) == oracle::pruned_vertices(spec, n));
    }
  }
}

TEST_CASE("pruning is idempotent and monotone in N") {
  for (const auto& name : generator_names()) {
    const auto spec = make_generator(name);
    std::vector<std::uint64_t> previous;
    for (std::uint64_t n = 1; n <= 24; ++n) {
      const auto t = truncate(spec, n);
      if (!t.empty()) {
        const auto again = truncate(as_spec(t), n);
        CHECK(indices(again) == indices(t));
        CHECK(edges(again) == edges(t));
      }
      const auto now = indices(t);
      CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
      previous = now;
    }
  }
}

TEST_CASE("mixing examples") {
  CHECK(is_topologically_mixing(truncate(full2(), 2)));
  CHECK_FALSE(is_topologically_mixing(truncate(cycle2(), 2)));
  CHECK(is_irreducible(truncate(cycle2(), 2)));
  CHECK(is_topologically_mixing(truncate(make_generator("renewal"), 3)));
}

TEST_CASE("mixing agrees with a Wielandt power check") {
  for (const auto& name : generator_names()) {
    const auto spec = make_generator(name);
    for (std::uint64_t n : {2, 3, 6, 9}) {
      const auto vs = oracle::pruned_vertices(spec, n);
      if (vs.empty()) continue;
      const auto a = oracle::adjacency(spec, vs);
      const auto k = static_cast<int>((vs.size() - 1) * (vs.size() - 1) + 1);
      Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a.rows(), a.cols());
      for (int i = 0; i < k; ++i) p = ((p * a).array() > 0).cast<double>().matrix();
      CAPTURE(name);
      CAPTURE(n);
      CHECK(is_topologically_mixing(truncate(spec, n)) == (p.minCoeff() > 0));
    }
  }
}

TEST_CASE("mixing bounds") {
  CHECK(mixing_bound(truncate(full2(), 2)) == 1);
  CHECK(mixing_bound(truncate(make_generator("renewal"), 3)) == 3);
  CHECK(mixing_bound(truncate(ShiftSpec::explicit_finite(1, {{1, 1}}), 1)) == 1);
  CHECK_THROWS_AS(mixing_bound(truncate(cycle2(), 2)), ValidationError);
}

TEST_CASE("word enumeration") {
  CHECK(enumerate_words(truncate(full2(), 2), 2) ==
        std::vector<Word>{word({1, 1}), word({1, 2}), word({2, 1}), word({2, 2})});
  CHECK(enumerate_words(truncate(cycle2(), 2), 3) == std::vector<Word>{word({1, 2, 1}), word({2, 1, 2})});
  CHECK(enumerate_words(truncate(make_generator("renewal"), 2), 2) ==
        std::vector<Word>{word({1, 1}), word({1, 2}), word({2, 1})});
}

TEST_CASE("enumerated words are admissible and match the oracle") {
  for (const auto& name : generator_names()) {
    const auto spec = make_generator(name);
    const auto t = truncate(spec, 7);
    const auto vs = oracle::pruned_vertices(spec, 7);
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto ws = enumerate_words(t, n);
      CHECK(ws == oracle::words(spec, vs, n));
      for (const auto& w : ws) CHECK(is_admissible(spec, w));
    }
  }
}

TEST_CASE("periodic orbit counts equal trace(A^n)") {
  for (const auto& name : generator_names()) {
    const auto spec = make_generator(name);
    for (std::uint64_t n : {4, 8, 12}) {
      const auto t = truncate(spec, n);
      const auto vs = oracle::pruned_vertices(spec, n);
      if (vs.empty()) continue;
      const auto a = oracle::adjacency(spec, vs);
      for (int p = 1; p <= 8; ++p) {
        CAPTURE(name);
        CAPTURE(n);
        CAPTURE(p);
        CHECK(static_cast<double>(periodic_orbits(t, static_cast<std::size_t>(p)).size()) == oracle::trace_power(a, p));
      }
    }
  }
}

TEST_CASE("periodic orbit examples") {
  CHECK(periodic_orbits(truncate(full2(), 2), 2).size() == 4);
  CHECK(periodic_orbits(truncate(cycle2(), 2), 3).empty());
  // Renewal N=4, period 3 through 1: the closed words 1xy with 1->x->y->1.
  const auto t = truncate(make_generator("renewal"), 4);
  const auto orbits = periodic_orbits(t, 3, VertexId{1});
  std::vector<Word> got;
  for (const auto& o : orbits) got.push_back(o.word);
  CHECK(got == std::vector<Word>{word({1, 1, 1}), word({1, 1, 2}), word({1, 2, 1}), word({1, 3, 2})});
  const auto primitive = periodic_orbits(t, 3, VertexId{1}, true);
  CHECK(primitive.size() == 3);
}

TEST_CASE("labels round-trip") {
  for (std::int64_t z = -50; z <= 50; ++z) CHECK(labels::integer_of_index(labels::index_of_integer(z)) == z);
  for (std::uint64_t i = 1; i < 200; ++i) CHECK(labels::tree_index(labels::tree_word(i)) == i);
  const auto dr = make_generator("double_renewal");
  CHECK(dr.label(dr.parse_label("-7")) == "-7");
  const auto tree = make_generator("dyadic_tree");
  CHECK(tree.label(VertexId{1}) == "<2>");
  CHECK(tree.parse_label("<132>").index == labels::tree_index("13"));
  CHECK_THROWS_AS(tree.parse_label("<102>"), ValidationError);
}

TEST_CASE("dyadic tree moves drop the first symbol") {
  const auto tree = make_generator("dyadic_tree");
  const auto v = tree.parse_label("<1332>");
  CHECK(tree.allowed(v, tree.parse_label("<332>")));
  CHECK_FALSE(tree.allowed(v, tree.parse_label("<132>")));
  CHECK(tree.allowed(tree.parse_label("<2>"), v));
}

TEST_CASE("loop system layout") {
  const auto loops = make_generator("loop_system");
  CHECK(loops.label(VertexId{1}) == "v");
  CHECK(loops.allowed(VertexId{1}, VertexId{1}));
  const auto b = loops.parse_label("b3.1.1");
  CHECK(loops.allowed(VertexId{1}, b));
  CHECK(loops.allowed(b, loops.parse_label("b3.1.2")));
  CHECK(loops.allowed(loops.parse_label("b3.1.2"), VertexId{1}));
  CHECK(loops.label(loops.parse_label("b5.1.4")) == "b5.1.4");
  const auto two = make_generator("loop_system", {{"p", {0, 2}}, {"p_tail", 0}});
  CHECK(two.alphabet_size() == std::optional<std::uint64_t>{3});
  CHECK(two.label(VertexId{3}) == "b2.2.1");
}

TEST_CASE("spec JSON round-trip and errors") {
  for (const auto& name : generator_names()) {
    const auto spec = make_generator(name);
    CHECK(ShiftSpec::from_json(spec.to_json()) == spec);
  }
  const auto e = full2();
  CHECK(ShiftSpec::from_json(e.to_json()) == e);
  CHECK_THROWS_AS(make_generator("nope"), ValidationError);
  CHECK_THROWS_AS(make_generator("renewal", {{"p", 1}}), ValidationError);
  CHECK_THROWS_AS(ShiftSpec::from_json(json{{"kind", "explicit"}, {"n", 2}}), ValidationError);
  CHECK_THROWS_AS(ShiftSpec::from_json(json{{"kind", "explicit"}, {"n", 2}, {"edges", {{1, 3}}}}), ValidationError);
}
