#include <doctest.h>

#include <random>

#include "cmspress/error.hpp"
#include "cmspress/potential.hpp"

using namespace cmspress;

namespace {

Word word(std::initializer_list<std::uint64_t> xs) {
  Word w;
  for (auto x : xs) w.emplace_back(x);
  return w;
}

Potential reciprocal() { return Potential::vertex_formula("reciprocal"); }

}  // namespace

TEST_CASE("evaluation examples") {
  const auto spec = make_generator("renewal");
  const auto table = Potential::locally_constant(1, {{"1", 0.25}, {"2", -1.5}});
  const auto r = table.eval(word({2, 1}), spec);
  CHECK(r.value == -1.5);
  CHECK(r.uncertainty == 0.0);
  CHECK(table.value(word({7}), spec) == 0.0);
  CHECK(reciprocal().value(word({4, 3}), spec) == 0.25);
  const auto combo = Potential::affine({{2.0, table}, {1.0, reciprocal()}}, 0.5);
  CHECK(combo.value(word({2}), spec) == doctest::Approx(2 * -1.5 + 0.5 + 0.5));
  CHECK((2.0 * table + reciprocal()).value(word({1}), spec) == doctest::Approx(1.5));
  CHECK((table - table).value(word({2}), spec) == 0.0);
  CHECK(Potential::constant(3.0).value(word({5}), spec) == 3.0);
  CHECK(Potential().value(word({5}), spec) == 0.0);
}

TEST_CASE("formulas on signed labels") {
  const auto dr = make_generator("double_renewal");
  const VertexId minus3 = dr.parse_label("-3");
  CHECK(reciprocal().value(Word{minus3}, dr) == doctest::Approx(-1.0 / 3));
  CHECK(Potential::vertex_formula("sign").value(Word{minus3}, dr) == -1.0);
  CHECK(Potential::vertex_formula("parity").value(Word{minus3}, dr) == 1.0);
  CHECK(reciprocal().value(Word{dr.parse_label("0")}, dr) == 0.0);
  const auto ind = Potential::vertex_formula("indicator", {{"vertex", "-3"}});
  CHECK(ind.value(Word{minus3}, dr) == 1.0);
  CHECK(ind.value(Word{dr.parse_label("3")}, dr) == 0.0);
  CHECK_THROWS_AS(Potential::vertex_formula("cube"), ValidationError);
}

TEST_CASE("evaluation errors") {
  const auto spec = make_generator("renewal");
  const auto deep = Potential::locally_constant(2, {{"1,1", 1.0}});
  CHECK_THROWS_AS(deep.value(word({1}), spec), ValidationError);
  CHECK_THROWS_AS(reciprocal().value(Word{}, spec), ValidationError);
  CHECK(Potential::locally_constant(0, {}, 2.0).is_constant());
  CHECK_THROWS_AS(Potential::locally_constant(0, {{"1", 1.0}}), ValidationError);
  CHECK_THROWS_AS(Potential::locally_constant(-1, {}), ValidationError);
}

TEST_CASE("depth and sup norm") {
  const auto deep = Potential::locally_constant(2, {{"1,1", 1.0}, {"2,1", -4.0}}, 0.5);
  CHECK(deep.depth() == 2);
  CHECK(deep.sup_norm() == 4.0);
  CHECK(reciprocal().depth() == 1);
  CHECK(reciprocal().sup_norm() == 1.0);
  CHECK(Potential::constant(-2.0).depth() == 0);
  CHECK(Potential::affine({{1.0, deep}, {1.0, reciprocal()}}).depth() == 2);
}

TEST_CASE("variation examples") {
  const auto t = truncate(make_generator("renewal"), 6);
  const auto deep = Potential::locally_constant(2, {{"1,1", 1.0}, {"1,2", 3.0}, {"2,1", -4.0}});
  CHECK(variation(deep, 3, t) == 0.0);
  CHECK(variation(deep, 2, t) == 0.0);
  CHECK(variation(deep, 1, t) == 3.0);
  CHECK(variation(Potential::constant(2.0), 0, t) == 0.0);
  CHECK(variation(Potential::constant(2.0), 5, t) == 0.0);

  const auto full = truncate(ShiftSpec::explicit_finite(5, [] {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t a = 1; a <= 5; ++a)
      for (std::uint64_t b = 1; b <= 5; ++b) e.emplace_back(a, b);
    return e;
  }()), 5);
  CHECK(variation(reciprocal(), 0, full) == doctest::Approx(1.0 - 1.0 / 5));
  CHECK(variation(reciprocal(), 1, full) == 0.0);
}

TEST_CASE("variation is nonincreasing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto t = truncate(make_generator("renewal"), 5);
  std::map<std::string, double> table;
  for (const auto& w : enumerate_words(t, 3)) table[word_key(w, t.spec())] = u(rng);
  const auto p = Potential::locally_constant(3, table);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n <= 4; ++n) {
    const double v = variation(p, n, t);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev == 0.0);
}

TEST_CASE("discretization") {
  const auto t = truncate(make_generator("renewal"), 4);
  const auto d = discretize(reciprocal(), 1, t);
  CHECK(d.kind() == Potential::Kind::locally_constant);
  CHECK(d.depth() == 1);
  for (std::uint64_t v = 1; v <= 4; ++v) CHECK(d.value(word({v}), t.spec()) == doctest::Approx(1.0 / v));

  const auto deep = Potential::locally_constant(2, {{"1,1", 1.0}, {"1,2", 3.0}});
  CHECK(discretize(deep, 2, t).to_json() == deep.to_json());
  CHECK(discretize(deep, 5, t).to_json() == deep.to_json());
  CHECK_THROWS_AS(discretize(deep, 0, t), ValidationError);
}

TEST_CASE("discretization error is bounded by the variation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto t = truncate(make_generator("renewal"), 6);
  std::map<std::string, double> table;
  for (const auto& w : enumerate_words(t, 3)) table[word_key(w, t.spec())] = u(rng);
  const auto p = Potential::locally_constant(3, table);
  const auto words = enumerate_words(t, 3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto q = discretize(p, n, t);
    const double v = variation(p, n, t);
    for (std::size_t k = n; k <= 4; ++k) CHECK(variation(q, k, t) == 0.0);
    for (int s = 0; s < 100; ++s) {
      const auto& w = words[pick(rng)];
      CHECK(std::abs(p.value(w, t.spec()) - q.value(w, t.spec())) <= v + 1e-15);
    }
  }
}

TEST_CASE("birkhoff sums") {
  const auto spec = make_generator("renewal");
  CHECK(birkhoff_sum(Potential::constant(0.75), word({1, 1, 2, 1}), spec) == 3.0);
  CHECK(birkhoff_sum(reciprocal(), PeriodicOrbit{word({1, 2})}, spec) == 1.5);
  const auto table = Potential::locally_constant(1, {{"1", 0.5}, {"2", 2.0}, {"3", -1.0}});
  CHECK(birkhoff_sum(table, PeriodicOrbit{word({1, 3, 2})}, spec) == 1.5);
  const auto deep = Potential::locally_constant(2, {{"1,3", 1.0}, {"3,2", 10.0}, {"2,1", 100.0}});
  CHECK(birkhoff_sum(deep, PeriodicOrbit{word({1, 3, 2})}, spec) == 111.0);
  CHECK(birkhoff_sum(deep, word({1, 3, 2}), spec) == 11.0);
  CHECK_THROWS_AS(birkhoff_sum(deep, word({1}), spec), ValidationError);
}

TEST_CASE("birkhoff sums are linear") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto t = truncate(make_generator("renewal"), 5);
  const auto orbits = periodic_orbits(t, 6);
  for (int k = 0; k < 50; ++k) {
    std::map<std::string, double> ta, tb;
    for (const auto& w : enumerate_words(t, 2)) {
      ta[word_key(w, t.spec())] = u(rng);
      tb[word_key(w, t.spec())] = u(rng);
    }
    const auto phi = Potential::locally_constant(2, ta);
    const auto psi = Potential::affine({{1.0, Potential::locally_constant(2, tb)}, {0.5, reciprocal()}});
    const double a = u(rng), b = u(rng);
    const auto combo = Potential::affine({{a, phi}, {b, psi}});
    for (const auto& o : orbits) {
      const double lhs = birkhoff_sum(combo, o, t.spec());
      const double rhs = a * birkhoff_sum(phi, o, t.spec()) + b * birkhoff_sum(psi, o, t.spec());
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("constant splitting and limits") {
  const auto p = Potential::affine({{2.0, reciprocal()}, {1.0, Potential::constant(0.25)}}, 1.0);
  const auto [rest, c] = p.split_constant();
  CHECK(c == doctest::Approx(1.25));
  const auto spec = make_generator("renewal");
  CHECK(rest.value(word({4}), spec) == doctest::Approx(0.5));

  const auto lim = Potential::vertex_formula("reciprocal", json::object(), {{"inf", 0.0}});
  CHECK(lim.boundary_limit("inf") == std::optional<double>{0.0});
  CHECK_FALSE(reciprocal().boundary_limit("inf").has_value());
  CHECK(Potential::constant(2.0).boundary_limit("anything") == std::optional<double>{2.0});
  const auto sum = Potential::affine({{3.0, lim}}, 1.0);
  CHECK(sum.boundary_limit("inf") == std::optional<double>{1.0});
}

TEST_CASE("potential JSON round-trip") {
  const std::vector<Potential> ps{
      Potential(), Potential::constant(-1.5), reciprocal(),
      Potential::locally_constant(2, {{"1,2", 0.5}}, -1.0, {{"inf", 0.25}}),
      Potential::vertex_formula("indicator", {{"vertex", "3"}}),
      Potential::affine({{2.0, reciprocal()}, {-1.0, Potential::vertex_formula("parity")}}, 0.5)};
  for (const auto& p : ps) CHECK(Potential::from_json(p.to_json()).to_json() == p.to_json());
  CHECK_THROWS_AS(Potential::from_json(json{{"kind", "nope"}}), ValidationError);
  CHECK_THROWS_AS(Potential::from_json(json::array()), ValidationError);
}
