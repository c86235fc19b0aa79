#include "cmspress/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmspress/error.hpp"

namespace cmspress {

struct Potential::Node {
  Kind kind = Kind::constant;
  double constant = 0.0;  // constant kind, or the additive constant of an affine combination
  int depth = 0;
  // locally constant
  std::map<std::string, double> table;
  double default_value = 0.0;
  // vertex formula
  std::string formula;
  json args = json::object();
  std::map<std::string, double> limits;
  // affine
  std::vector<std::pair<double, Potential>> terms;
};

namespace {

std::map<std::string, double> read_limits(const json& j) {
  std::map<std::string, double> out;
  if (!j.contains("boundary_limits")) return out;
  if (!j["boundary_limits"].is_object())
    throw ValidationError("potential spec: 'boundary_limits' must be an object of numbers");
  for (const auto& [k, v] : j["boundary_limits"].items()) {
    if (!v.is_number()) throw ValidationError("potential spec: boundary limit '" + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

bool is_formula(const std::string& name) {
  return name == "reciprocal" || name == "sign" || name == "parity" || name == "indicator" || name == "constant";
}

}  // namespace

Potential::Potential() : Potential(constant(0.0)) {}

Potential Potential::constant(double c) {
  if (!std::isfinite(c)) throw ValidationError("potential: constant must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->constant = c;
  return Potential(std::move(n));
}

Potential Potential::locally_constant(int depth, std::map<std::string, double> table, double default_value,
                                      std::map<std::string, double> limits) {
  if (depth < 0) throw ValidationError("potential: depth must be >= 0");
  if (depth == 0) {
    if (!table.empty()) throw ValidationError("potential: a depth-0 table must be empty");
    return constant(default_value);
  }
  for (const auto& [k, v] : table)
    if (!std::isfinite(v)) throw ValidationError("potential: table value for '" + k + "' is not finite");
  if (!std::isfinite(default_value)) throw ValidationError("potential: default must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::locally_constant;
  n->depth = depth;
  n->table = std::move(table);
  n->default_value = default_value;
  n->limits = std::move(limits);
  return Potential(std::move(n));
}

Potential Potential::vertex_formula(const std::string& name, const json& args, std::map<std::string, double> limits) {
  if (!is_formula(name))
    throw ValidationError("potential: unknown vertex formula '" + name +
                          "' (known: reciprocal, sign, parity, indicator, constant)");
  if (name == "indicator" && (!args.contains("vertex") || !args["vertex"].is_string()))
    throw ValidationError("potential: indicator needs a string field 'vertex'");
  if (name == "constant" && (!args.contains("value") || !args["value"].is_number()))
    throw ValidationError("potential: constant formula needs a numeric field 'value'");
  auto n = std::make_shared<Node>();
  n->kind = Kind::vertex_formula;
  n->depth = 1;
  n->formula = name;
  n->args = args;
  n->limits = std::move(limits);
  return Potential(std::move(n));
}

Potential Potential::affine(std::vector<std::pair<double, Potential>> terms, double constant) {
  if (!std::isfinite(constant)) throw ValidationError("potential: affine constant must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::affine;
  n->constant = constant;
  for (const auto& [a, p] : terms) {
    if (!std::isfinite(a)) throw ValidationError("potential: affine coefficient must be finite");
    n->depth = std::max(n->depth, p.depth());
  }
  n->terms = std::move(terms);
  return Potential(std::move(n));
}

Potential::Kind Potential::kind() const { return node_->kind; }
int Potential::depth() const { return node_->depth; }

double Potential::sup_norm() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::constant: return std::abs(n.constant);
    case Kind::locally_constant: {
      double m = std::abs(n.default_value);
      for (const auto& [k, v] : n.table) m = std::max(m, std::abs(v));
      return m;
    }
    case Kind::vertex_formula:
      if (n.formula == "constant") return std::abs(n.args["value"].get<double>());
      return 1.0;
    case Kind::affine: {
      double m = std::abs(n.constant);
      for (const auto& [a, p] : n.terms) m += std::abs(a) * p.sup_norm();
      return m;
    }
  }
  return 0.0;
}

std::string word_key(std::span<const VertexId> w, const ShiftSpec& spec) {
  std::string key;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) key += ',';
    key += spec.label(w[i]);
  }
  return key;
}

EvalResult Potential::eval(std::span<const VertexId> w, const ShiftSpec& spec) const {
  const Node& n = *node_;
  if (w.size() < static_cast<std::size_t>(std::max(n.depth, 1)))
    throw ValidationError("potential: word of length " + std::to_string(w.size()) + " shorter than depth " +
                          std::to_string(std::max(n.depth, 1)));
  switch (n.kind) {
    case Kind::constant: return {n.constant, 0.0};
    case Kind::locally_constant: {
      const auto it = n.table.find(word_key(w.first(static_cast<std::size_t>(n.depth)), spec));
      return {it == n.table.end() ? n.default_value : it->second, 0.0};
    }
    case Kind::vertex_formula: {
      if (n.formula == "constant") return {n.args["value"].get<double>(), 0.0};
      if (n.formula == "indicator") return {spec.label(w[0]) == n.args["vertex"].get<std::string>() ? 1.0 : 0.0, 0.0};
      const auto z = spec.integer_label(w[0]);
      if (!z) throw ValidationError("potential: formula '" + n.formula + "' needs integer labels on '" + spec.name() + "'");
      if (n.formula == "reciprocal") return {*z == 0 ? 0.0 : 1.0 / static_cast<double>(*z), 0.0};
      if (n.formula == "sign") return {*z > 0 ? 1.0 : (*z < 0 ? -1.0 : 0.0), 0.0};
      return {static_cast<double>(std::abs(*z) % 2), 0.0};  // parity
    }
    case Kind::affine: {
      double v = n.constant;
      for (const auto& [a, p] : n.terms) v += a * p.value(w, spec);
      return {v, 0.0};
    }
  }
  return {};
}

std::optional<double> Potential::boundary_limit(const std::string& symbol) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::constant: return n.constant;
    case Kind::locally_constant:
    case Kind::vertex_formula: {
      if (n.kind == Kind::vertex_formula && n.formula == "constant") return n.args["value"].get<double>();
      auto it = n.limits.find(symbol);
      if (it == n.limits.end()) return std::nullopt;
      return it->second;
    }
    case Kind::affine: {
      double v = n.constant;
      for (const auto& [a, p] : n.terms) {
        auto lim = p.boundary_limit(symbol);
        if (!lim) return std::nullopt;
        v += a * *lim;
      }
      return v;
    }
  }
  return std::nullopt;
}

std::map<std::string, double> Potential::declared_limits() const {
  const Node& n = *node_;
  if (n.kind == Kind::affine) {
    std::map<std::string, double> keys;
    for (const auto& [a, p] : n.terms)
      for (const auto& [k, v] : p.declared_limits()) keys[k] = 0.0;
    std::map<std::string, double> out;
    for (const auto& [k, unused] : keys)
      if (auto v = boundary_limit(k)) out[k] = *v;
    return out;
  }
  return n.limits;
}

std::pair<Potential, double> Potential::split_constant() const {
  const Node& n = *node_;
  if (n.kind == Kind::constant) return {constant(0.0), n.constant};
  if (n.kind != Kind::affine) return {*this, 0.0};
  double c = n.constant;
  std::vector<std::pair<double, Potential>> rest;
  for (const auto& [a, p] : n.terms) {
    auto [q, d] = p.split_constant();
    c += a * d;
    if (!q.is_constant()) rest.emplace_back(a, q);
  }
  if (rest.empty()) return {constant(0.0), c};
  if (rest.size() == 1 && rest[0].first == 1.0) return {rest[0].second, c};
  return {affine(std::move(rest), 0.0), c};
}

json Potential::to_json() const {
  const Node& n = *node_;
  json j;
  switch (n.kind) {
    case Kind::constant: return {{"kind", "constant"}, {"value", n.constant}};
    case Kind::locally_constant:
      j = {{"kind", "locally_constant"}, {"depth", n.depth}, {"table", n.table}, {"default", n.default_value}};
      break;
    case Kind::vertex_formula:
      j = {{"kind", "vertex_formula"}, {"name", n.formula}};
      for (const auto& [k, v] : n.args.items()) j[k] = v;
      break;
    case Kind::affine: {
      json terms = json::array();
      for (const auto& [a, p] : n.terms) terms.push_back({{"coef", a}, {"potential", p.to_json()}});
      return {{"kind", "affine"}, {"terms", terms}, {"constant", n.constant}};
    }
  }
  if (!n.limits.empty()) j["boundary_limits"] = n.limits;
  return j;
}

Potential Potential::from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("potential spec: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("potential spec: missing string field 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    if (!j.contains("value") || !j["value"].is_number())
      throw ValidationError("potential spec: constant needs a numeric field 'value'");
    return constant(j["value"].get<double>());
  }
  if (kind == "locally_constant") {
    if (!j.contains("depth") || !j["depth"].is_number_integer())
      throw ValidationError("potential spec: field 'depth' must be an integer");
    std::map<std::string, double> table;
    if (j.contains("table")) {
      if (!j["table"].is_object()) throw ValidationError("potential spec: field 'table' must be an object");
      for (const auto& [k, v] : j["table"].items()) {
        if (!v.is_number()) throw ValidationError("potential spec: table entry '" + k + "' must be a number");
        table[k] = v.get<double>();
      }
    }
    double def = 0.0;
    if (j.contains("default")) {
      if (!j["default"].is_number()) throw ValidationError("potential spec: field 'default' must be a number");
      def = j["default"].get<double>();
    }
    const int depth = j["depth"].get<int>();
    for (const auto& [k, v] : table) {
      const auto commas = static_cast<int>(std::count(k.begin(), k.end(), ','));
      if (commas + 1 != depth)
        throw ValidationError("potential spec: table key '" + k + "' does not have " + std::to_string(depth) +
                              " symbols");
    }
    return locally_constant(depth, std::move(table), def, read_limits(j));
  }
  if (kind == "vertex_formula") {
    if (!j.contains("name") || !j["name"].is_string())
      throw ValidationError("potential spec: missing string field 'name'");
    json args = json::object();
    for (const auto& [k, v] : j.items())
      if (k != "kind" && k != "name" && k != "boundary_limits") args[k] = v;
    return vertex_formula(j["name"].get<std::string>(), args, read_limits(j));
  }
  if (kind == "affine") {
    if (!j.contains("terms") || !j["terms"].is_array())
      throw ValidationError("potential spec: affine needs an array field 'terms'");
    std::vector<std::pair<double, Potential>> terms;
    for (const auto& t : j["terms"]) {
      if (!t.is_object() || !t.contains("coef") || !t["coef"].is_number() || !t.contains("potential"))
        throw ValidationError("potential spec: each affine term needs 'coef' and 'potential'");
      terms.emplace_back(t["coef"].get<double>(), from_json(t["potential"]));
    }
    double c = 0.0;
    if (j.contains("constant")) {
      if (!j["constant"].is_number()) throw ValidationError("potential spec: field 'constant' must be a number");
      c = j["constant"].get<double>();
    }
    return affine(std::move(terms), c);
  }
  throw ValidationError("potential spec: unknown kind '" + kind +
                        "' (known: constant, locally_constant, vertex_formula, affine)");
}

Potential operator+(const Potential& a, const Potential& b) { return Potential::affine({{1.0, a}, {1.0, b}}); }
Potential operator-(const Potential& a, const Potential& b) { return Potential::affine({{1.0, a}, {-1.0, b}}); }
Potential operator*(double s, const Potential& p) { return Potential::affine({{s, p}}); }
Potential Potential::plus(double c) const { return affine({{1.0, *this}}, c); }

double birkhoff_sum(const Potential& p, std::span<const VertexId> w, const ShiftSpec& spec) {
  const auto d = static_cast<std::size_t>(std::max(p.depth(), 1));
  if (w.size() < d) throw ValidationError("birkhoff_sum: word shorter than the potential's depth");
  double s = 0.0;
  for (std::size_t i = 0; i + d <= w.size(); ++i) s += p.value(w.subspan(i, d), spec);
  return s;
}

double birkhoff_sum(const Potential& p, const PeriodicOrbit& orbit, const ShiftSpec& spec) {
  const std::size_t n = orbit.period();
  if (n == 0) throw ValidationError("birkhoff_sum: empty orbit");
  const auto d = static_cast<std::size_t>(std::max(p.depth(), 1));
  Word extended;
  extended.reserve(n + d);
  for (std::size_t i = 0; i < n + d - 1; ++i) extended.push_back(orbit.word[i % n]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += p.value(std::span<const VertexId>(extended).subspan(i, d), spec);
  return s;
}

namespace {

// Lexicographically least extension of a word of t to the given length.
Word least_extension(const TruncatedSFT& t, const Word& w, std::size_t length) {
  Word out = w;
  while (out.size() < length) {
    const auto u = *t.local_index(out.back());
    out.push_back(t.vertex(t.successors(u).front()));
  }
  return out;
}

}  // namespace

double variation(const Potential& p, std::size_t n, const TruncatedSFT& t) {
  if (p.depth() == 0 || t.empty()) return 0.0;
  const auto d = static_cast<std::size_t>(p.depth());
  if (n >= d) return 0.0;
  std::map<Word, std::pair<double, double>> range;
  for (const auto& w : enumerate_words(t, d)) {
    const double v = p.value(w, t.spec());
    Word prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
    auto [it, fresh] = range.try_emplace(prefix, v, v);
    if (!fresh) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  double best = 0.0;
  for (const auto& [k, r] : range) best = std::max(best, r.second - r.first);
  return best;
}

Potential discretize(const Potential& p, std::size_t n, const TruncatedSFT& t) {
  if (n < 1) throw ValidationError("discretize: n must be >= 1");
  if (p.depth() == 0) return p;
  if ((p.kind() == Potential::Kind::locally_constant) && static_cast<std::size_t>(p.depth()) <= n) return p;
  const auto d = static_cast<std::size_t>(p.depth());
  const std::size_t m = std::min(n, d);
  std::map<std::string, double> table;
  if (!t.empty()) {
    for (const auto& w : enumerate_words(t, m)) {
      const Word ext = least_extension(t, w, d);
      table[word_key(w, t.spec())] = p.value(ext, t.spec());
    }
  }
  return Potential::locally_constant(static_cast<int>(m), std::move(table), 0.0, p.declared_limits());
}

}  // namespace cmspress
