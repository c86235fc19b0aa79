#include <doctest.h>

#include <random>

#include "cmspress/error.hpp"
#include "cmspress/metric.hpp"

using namespace cmspress;

namespace {

std::vector<MetricPtr> families() {
  return {zargaryan_metric(),
          discrete_metric(),
          make_metric({{"family", "tree_backward"}}),
          make_metric({{"family", "double_renewal"}}),
          make_metric({{"family", "birth_death_parity"}}),
          make_metric({{"family", "embedding"}, {"layout", "zigzag_2"}}),
          make_metric({{"family", "embedding"}, {"layout", "zigzag_3"}}),
          make_metric({{"family", "embedding"}, {"layout", "circle"}}),
          make_metric({{"family", "embedding"}, {"points", {{0.0, 0.0}, {0.3, 0.4}, {1.0, 1.0}, {0.1, 0.0}}}})};
}

std::uint64_t domain(const VertexMetric& vm) { return vm.domain_size().value_or(500); }

Word constant_word(std::uint64_t v, std::size_t n) { return Word(n, VertexId{v}); }

}  // namespace

TEST_CASE("rho examples") {
  CHECK(zargaryan_metric()->rho(VertexId{2}, VertexId{3}) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  const auto bd = make_metric({{"family", "birth_death_parity"}});
  CHECK(bd->rho(VertexId{3}, VertexId{5}) == doctest::Approx(2.0 / 15).epsilon(1e-15));
  CHECK(bd->rho(VertexId{3}, VertexId{4}) == 1.0);
  const auto tree = make_metric({{"family", "tree_backward"}});
  // Words over {1,3} compared from the end: "11" and "31" share one symbol.
  CHECK(tree->rho(VertexId{labels::tree_index("11")}, VertexId{labels::tree_index("31")}) == 0.5);
  CHECK(tree->rho(VertexId{labels::tree_index("1")}, VertexId{labels::tree_index("3")}) == 1.0);
  CHECK(tree->rho(VertexId{1}, VertexId{labels::tree_index("13")}) == 1.0);
  CHECK(tree->rho(VertexId{labels::tree_index("113")}, VertexId{labels::tree_index("313")}) == doctest::Approx(1.0 / 3));
  const auto dr = make_metric({{"family", "double_renewal"}});
  CHECK(dr->rho(VertexId{labels::index_of_integer(2)}, VertexId{labels::index_of_integer(-2)}) == 1.0);
  CHECK(dr->rho(VertexId{labels::index_of_integer(-2)}, VertexId{labels::index_of_integer(-4)}) == 0.25);
  CHECK_THROWS_AS(zargaryan_metric()->rho(VertexId{0}, VertexId{1}), ValidationError);
  const auto pts = make_metric({{"family", "embedding"}, {"points", {{0.0, 0.0}, {0.3, 0.4}}}});
  CHECK(pts->rho(VertexId{1}, VertexId{2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(pts->rho(VertexId{1}, VertexId{3}), ValidationError);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(20261019);
  for (const auto& vm : families()) {
    CAPTURE(vm->family());
    std::uniform_int_distribution<std::uint64_t> pick(1, domain(*vm));
    std::size_t bad = 0;
    for (int k = 0; k < 10000; ++k) {
      const VertexId a{pick(rng)}, b{pick(rng)}, c{pick(rng)};
      const double ab = vm->rho(a, b), ba = vm->rho(b, a), bc = vm->rho(b, c), ac = vm->rho(a, c);
      if (ab != ba || ab < 0.0 || ab > 1.0 || vm->rho(a, a) != 0.0 || ac > ab + bc + 1e-12) ++bad;
      if (a != b && ab == 0.0) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("classification verdicts") {
  const std::vector<double> eps{0.5, 1.0 / 3, 0.25};
  const auto z = classify(*zargaryan_metric(), 1000, eps);
  CHECK(z.vanishing == Verdict::yes);
  CHECK(z.totally_bounded == Verdict::yes);
  for (auto [n, s] : z.tail_sup) CHECK(s <= 1.0 / static_cast<double>(n) + 1e-15);

  const auto d = classify(*discrete_metric(), 200, eps);
  CHECK(d.vanishing == Verdict::no);
  CHECK(d.totally_bounded == Verdict::no);
  for (const auto& net : d.nets) CHECK(net.size == net.n);

  const auto t = classify(*make_metric({{"family", "tree_backward"}}), 1000, eps);
  CHECK(t.vanishing == Verdict::no);
  CHECK(t.totally_bounded == Verdict::yes);

  CHECK_THROWS_AS(classify(*zargaryan_metric(), 1, eps), ValidationError);
}

TEST_CASE("greedy tree nets stabilize") {
  const auto tree = make_metric({{"family", "tree_backward"}});
  const std::vector<std::uint64_t> checkpoints{255, 1023, 4095};
  for (double eps : {0.5, 1.0 / 3, 0.25}) {
    const auto sizes = greedy_net_sizes(*tree, eps, checkpoints);
    CAPTURE(eps);
    CHECK(sizes[1] == sizes[2]);
  }
}

TEST_CASE("vanishing implies totally bounded for every family") {
  const std::vector<double> eps{0.5, 0.25};
  for (const auto& vm : families()) {
    const auto c = classify(*vm, std::min<std::uint64_t>(domain(*vm), 300), eps);
    if (c.vanishing == Verdict::yes) CHECK(c.totally_bounded == Verdict::yes);
  }
}

TEST_CASE("shift distance examples") {
  const ShiftMetric half(zargaryan_metric(), 0.5);
  const auto x = constant_word(1, 12);
  auto r = shift_distance(half, x, x, 5);
  CHECK(r.value == 0.0);
  CHECK(r.tail_bound == doctest::Approx(std::pow(0.5, 5) / 0.5));

  Word y = x;
  y[0] = VertexId{2};
  CHECK(shift_distance(half, x, y, 2).value == doctest::Approx(0.5));

  const ShiftMetric disc(discrete_metric(), 0.5);
  const auto z = constant_word(2, 12);
  r = shift_distance(disc, x, z, 10);
  CHECK(r.value == doctest::Approx(2.0 * (1.0 - std::ldexp(1.0, -10))));
  CHECK(r.tail_bound == doctest::Approx(std::ldexp(1.0, -9)));
  CHECK_THROWS_AS(shift_distance(disc, x, z, 13), ValidationError);
  CHECK_THROWS_AS(ShiftMetric(discrete_metric(), 1.0), ValidationError);
}

TEST_CASE("shift distance tail soundness and cylinder bound") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 40);
  std::uniform_real_distribution<double> theta(0.05, 0.95);
  for (const auto& vm : {zargaryan_metric(), discrete_metric(), make_metric({{"family", "double_renewal"}})}) {
    for (int k = 0; k < 300; ++k) {
      const ShiftMetric sm(vm, theta(rng));
      Word x(30), y(30);
      const std::size_t agree = static_cast<std::size_t>(pick(rng) % 10);
      for (std::size_t i = 0; i < 30; ++i) {
        x[i] = VertexId{pick(rng)};
        y[i] = i < agree ? x[i] : VertexId{pick(rng)};
      }
      const std::size_t n = 1 + static_cast<std::size_t>(pick(rng) % 20);
      const auto a = shift_distance(sm, x, y, n);
      const auto b = shift_distance(sm, x, y, 30);
      CHECK(b.value >= a.value - 1e-15);
      CHECK(b.value <= a.value + a.tail_bound + 1e-12);
      CHECK(b.value <= std::pow(sm.theta(), static_cast<double>(agree)) / (1.0 - sm.theta()) + 1e-12);
    }
  }
}

TEST_CASE("vertex set diameters") {
  CHECK(vertex_set_diameter(*zargaryan_metric(), std::vector<VertexId>{VertexId{7}}) == 0.0);
  for (std::uint64_t n : {1, 3, 10, 50}) {
    std::vector<VertexId> s;
    for (auto v = n; v <= 2 * n; ++v) s.emplace_back(v);
    CHECK(vertex_set_diameter(*zargaryan_metric(), s) == doctest::Approx(1.0 / (2.0 * n)));
    if (s.size() >= 2) CHECK(vertex_set_diameter(*discrete_metric(), s) == 1.0);
  }
  CHECK_THROWS_AS(vertex_set_diameter(*zargaryan_metric(), std::vector<VertexId>{}), ValidationError);
}

TEST_CASE("metric JSON and compatibility") {
  for (const auto& vm : families()) CHECK(make_metric(vm->to_json())->to_json() == vm->to_json());
  CHECK_THROWS_AS(make_metric({{"family", "nope"}}), ValidationError);
  CHECK_THROWS_AS(make_metric(json::array()), ValidationError);
  CHECK_THROWS_AS(check_compatible(*make_metric({{"family", "tree_backward"}}), make_generator("renewal")),
                  ValidationError);
  CHECK_NOTHROW(check_compatible(*zargaryan_metric(), make_generator("renewal")));
  const auto small = make_metric({{"family", "embedding"}, {"points", {{0.0, 0.0}, {1.0, 0.0}}}});
  CHECK_THROWS_AS(check_compatible(*small, make_generator("renewal")), ValidationError);
}
