#include "cmspress/gallery.hpp"

#include <cmath>
#include <numbers>

#include "cmspress/error.hpp"

namespace cmspress {

std::string to_string(OracleBasis b) {
  switch (b) {
    case OracleBasis::closed_form: return "closed_form";
    case OracleBasis::literature: return "literature";
    case OracleBasis::cross_checked: return "cross_checked";
  }
  return "closed_form";
}

namespace {

using P = Provenance;

BoundaryModel single_infinity(const ShiftSpec& spec, bool into, bool out_of) {
  BoundaryModel m;
  const auto inf = m.add_symbol("inf", SymbolSource::vanishing_point);
  if (into) m.to_boundary.push_back({VertexId{1}, inf, P::analytic});
  if (out_of) m.from_boundary.push_back({inf, VertexId{1}, P::analytic});
  m.within_boundary.push_back({inf, inf, P::analytic});
  (void)spec;
  return m;
}

BoundaryModel double_renewal_model() {
  BoundaryModel m;
  const auto plus = m.add_symbol("+inf", SymbolSource::declared);
  const auto minus = m.add_symbol("-inf", SymbolSource::declared);
  const VertexId zero{labels::index_of_integer(0)};
  m.to_boundary.push_back({zero, plus, P::analytic});
  m.to_boundary.push_back({zero, minus, P::analytic});
  m.within_boundary.push_back({plus, plus, P::analytic});
  m.within_boundary.push_back({minus, minus, P::analytic});
  return m;
}

// Depth-3 suffix classes stand in for the Cantor set of left-infinite words.
BoundaryModel dyadic_model() {
  BoundaryModel m;
  for (const char* w : {"111", "113", "131", "133", "311", "313", "331", "333"}) {
    const auto s = m.add_symbol(std::string("inf<") + w + ">", SymbolSource::sector_chain);
    m.to_boundary.push_back({VertexId{1}, s, P::analytic});
    m.within_boundary.push_back({s, s, P::analytic});
  }
  return m;
}

BoundaryModel birth_death_model() {
  BoundaryModel m;
  const auto odd = m.add_symbol("inf_o", SymbolSource::declared);
  const auto even = m.add_symbol("inf_e", SymbolSource::declared);
  for (auto a : {odd, even})
    for (auto b : {odd, even}) m.within_boundary.push_back({a, b, P::analytic});
  return m;
}

// The limit points of the zig-zag curves; the shift walks them in reverse phase order.
BoundaryModel zigzag_model(int curves) {
  BoundaryModel m;
  const VertexId root{1};
  if (curves == 2) {
    const auto a = m.add_symbol("inf_1", SymbolSource::declared);
    const auto b = m.add_symbol("inf_2", SymbolSource::declared);
    m.to_boundary.push_back({root, a, P::analytic});
    m.to_boundary.push_back({root, b, P::analytic});
    m.within_boundary.push_back({a, b, P::analytic});
    m.within_boundary.push_back({b, a, P::analytic});
    return m;
  }
  // Phase j of the label; the curve a phase sits on is the first number.
  const char* ids[6] = {"inf_1.0", "inf_3.1", "inf_1.2", "inf_2.3", "inf_3.4", "inf_2.5"};
  for (const char* id : ids) {
    const auto s = m.add_symbol(id, SymbolSource::declared);
    m.to_boundary.push_back({root, s, P::analytic});
  }
  for (std::size_t j = 0; j < 6; ++j) m.within_boundary.push_back({j, (j + 5) % 6, P::analytic});
  return m;
}

// The unit circle, cut at angle 0 where loops leave and re-enter the hub.
BoundaryModel circle_model() {
  BoundaryModel m;
  const VertexId hub{1};
  const auto in = m.add_symbol("theta0.in", SymbolSource::declared);
  const auto out = m.add_symbol("theta0.out", SymbolSource::declared);
  for (const char* id : {"theta1", "theta2", "theta3"}) m.add_symbol(id, SymbolSource::declared);
  m.to_boundary.push_back({hub, in, P::analytic});
  m.from_boundary.push_back({out, hub, P::analytic});
  for (std::size_t s = 0; s < m.symbols.size(); ++s) m.within_boundary.push_back({s, s, P::analytic});
  return m;
}

json circle_metric_json(const ShiftSpec& spec) {
  json j = {{"family", "embedding"}, {"layout", "circle"}};
  const json params = spec.generator().params();
  j["p"] = params.at("p");
  j["p_tail"] = params.at("p_tail");
  if (params.contains("r")) j["r"] = params["r"];
  return j;
}

bool all_ones(const ShiftSpec& spec) {
  const json params = spec.generator().params();
  for (const auto& v : params.at("p"))
    if (v.get<std::uint64_t>() != 1) return false;
  return params.at("p_tail").get<std::uint64_t>() == 1;
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"renewal",     "backwards_renewal", "random_walk_1side", "double_renewal", "dyadic_tree",
          "loop_system", "zigzag_2",          "zigzag_3",          "circle_loops",   "birth_death_parity"};
}

std::optional<BoundaryModel> analytic_boundary(const ShiftSpec& spec) {
  if (spec.is_explicit() || spec.alphabet_size()) return std::nullopt;
  const auto name = spec.name();
  if (name == "renewal") return single_infinity(spec, true, false);
  if (name == "backwards_renewal") return single_infinity(spec, false, true);
  if (name == "random_walk_1side") return single_infinity(spec, false, false);
  if (name == "double_renewal") return double_renewal_model();
  if (name == "dyadic_tree") return dyadic_model();
  if (name == "birth_death_parity") return birth_death_model();
  if (name == "zigzag_2") return zigzag_model(2);
  if (name == "zigzag_3") return zigzag_model(3);
  if (name == "loop_system" || name == "circle_loops") return circle_model();
  return std::nullopt;
}

GalleryEntry instantiate(const std::string& name, const json& params) {
  bool known = false;
  for (const auto& n : gallery_names()) known = known || n == name;
  if (!known) {
    std::string list;
    for (const auto& n : gallery_names()) list += (list.empty() ? "" : ", ") + n;
    throw ValidationError("unknown gallery entry '" + name + "' (catalogue: " + list + ")");
  }
  GalleryEntry e;
  e.name = name;
  e.spec = make_generator(name, params);
  e.cutoffs = {4, 16, 64};
  e.n_max = 1024;
  const double log2 = std::numbers::ln2;
  const auto oracle = [&](std::string q, json v, OracleBasis b) { e.oracles.push_back({std::move(q), std::move(v), b}); };

  if (name == "renewal" || name == "backwards_renewal" || name == "random_walk_1side") {
    e.metric = zargaryan_metric();
    e.entropy = log2;
    e.sectorial = true;
    if (name == "renewal") e.interior_rich = true;
  } else if (name == "double_renewal") {
    e.metric = make_metric({{"family", "double_renewal"}});
    e.entropy = std::log(1.0 + std::numbers::sqrt2);
    e.sectorial = true;
    e.cutoffs = {2, 4, 8};
    e.n_max = 200;
  } else if (name == "dyadic_tree") {
    e.metric = make_metric({{"family", "tree_backward"}});
    e.entropy = std::log(3.0);
    e.sectorial = true;
    e.cutoffs = {1, 3, 7, 15, 31};
    e.n_max = 2047;
  } else if (name == "loop_system" || name == "circle_loops") {
    e.metric = make_metric(circle_metric_json(e.spec));
    if (all_ones(e.spec)) e.entropy = log2;
    e.sectorial = false;
    e.interior_rich = true;
  } else if (name == "zigzag_2" || name == "zigzag_3") {
    e.metric = make_metric({{"family", "embedding"}, {"layout", name}});
    e.entropy = log2;
    e.sectorial = false;
  } else if (name == "birth_death_parity") {
    e.metric = make_metric({{"family", "birth_death_parity"}});
    e.entropy = std::log(3.0);
    e.sectorial = false;
    e.interior_rich = true;
  }
  check_compatible(*e.metric, e.spec);
  auto model = analytic_boundary(e.spec);
  if (!model) throw ValidationError("gallery entry '" + name + "': parameters give a finite alphabet");
  e.boundary = std::move(*model);
  e.boundary_entropy = cmspress::boundary_entropy(e.boundary);

  const bool stated = name == "renewal" || name == "birth_death_parity" || name == "double_renewal";
  if (e.entropy) oracle("entropy", *e.entropy, name == "renewal" ? OracleBasis::literature : OracleBasis::closed_form);
  oracle("boundary_entropy", e.boundary_entropy,
         name == "birth_death_parity" ? OracleBasis::literature : OracleBasis::closed_form);
  oracle("boundary_symbols", e.boundary.symbols.size(),
         name == "double_renewal" ? OracleBasis::literature : OracleBasis::closed_form);
  oracle("sectorial", e.sectorial, stated || name.starts_with("zigzag") ? OracleBasis::literature
                                                                        : OracleBasis::cross_checked);
  if (e.interior_rich)
    oracle("interior_rich", *e.interior_rich,
           name == "birth_death_parity" ? OracleBasis::literature : OracleBasis::cross_checked);
  return e;
}

json to_json(const GalleryEntry& e) {
  json oracles = json::array();
  for (const auto& o : e.oracles) oracles.push_back({{"quantity", o.quantity}, {"value", o.value}, {"basis", to_string(o.basis)}});
  json j = {{"name", e.name},
            {"spec", e.spec.to_json()},
            {"metric", e.metric->to_json()},
            {"boundary", e.boundary.to_json(e.spec)},
            {"cutoffs", e.cutoffs},
            {"nmax", e.n_max},
            {"boundary_entropy", e.boundary_entropy},
            {"sectorial", e.sectorial},
            {"oracles", oracles}};
  if (e.entropy) j["entropy"] = *e.entropy;
  if (e.interior_rich) j["interior_rich"] = *e.interior_rich;
  return j;
}

}  // namespace cmspress
