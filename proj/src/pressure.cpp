#include "cmspress/pressure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "cmspress/error.hpp"
#include "cmspress/kernels.hpp"

namespace cmspress {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp(const std::vector<double>& xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

Potential depth_one(const Potential& p, const char* what) {
  auto [q, c] = p.split_constant();
  if (q.depth() > 1) throw ValidationError(std::string(what) + ": potential must depend on the first symbol only");
  return p;
}

}  // namespace

Recoded recode(const TruncatedSFT& t, const Potential& p) {
  if (t.empty()) throw ValidationError("empty subshift");
  auto [q, c] = p.split_constant();
  Recoded r;
  r.constant = c;
  r.depth = std::max(q.depth(), 1);
  const auto& spec = t.spec();
  if (r.depth == 1) {
    r.graph.graph.row_ptr.assign(t.row_ptr().begin(), t.row_ptr().end());
    r.graph.graph.cols.assign(t.cols().begin(), t.cols().end());
    for (std::size_t u = 0; u < t.size(); ++u) {
      const Word w{t.vertex(u)};
      r.states.push_back(w);
      r.graph.weight.push_back(q.value(w, spec));
      r.graph.names.push_back(spec.label(w[0]));
    }
    return r;
  }
  const auto d = static_cast<std::size_t>(r.depth);
  r.states = enumerate_words(t, d);
  std::map<Word, std::uint32_t> index;
  for (std::uint32_t i = 0; i < r.states.size(); ++i) index.emplace(r.states[i], i);
  std::vector<std::vector<std::uint32_t>> succ(r.states.size());
  for (std::uint32_t i = 0; i < r.states.size(); ++i) {
    const auto& w = r.states[i];
    Word next(w.begin() + 1, w.end());
    next.emplace_back();
    for (auto v : t.successors(*t.local_index(w.back()))) {
      next.back() = t.vertex(v);
      succ[i].push_back(index.at(next));
    }
    std::sort(succ[i].begin(), succ[i].end());
    r.graph.weight.push_back(q.value(w, spec));
    r.graph.names.push_back(word_key(w, spec));
  }
  r.graph.graph = make_csr(succ);
  return r;
}

PressureEstimate sft_pressure(const TruncatedSFT& t, const Potential& p) {
  const auto r = recode(t, p);
  auto est = spectral_pressure(r.graph);
  est.value += r.constant;
  est.lower += r.constant;
  est.upper += r.constant;
  est.params["N"] = t.bound();
  est.params["depth"] = r.depth;
  return est;
}

InteriorReport interior_pressure(const ShiftSpec& spec, const Potential& p, const std::vector<std::uint64_t>& schedule) {
  if (schedule.empty()) throw ValidationError("interior_pressure: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw ValidationError("interior_pressure: schedule must be strictly increasing");
  std::vector<std::optional<PressureEstimate>> per(schedule.size());
  kernels::for_each_index(schedule.size(), [&](std::size_t i) {
    const auto t = truncate(spec, schedule[i]);
    if (!t.empty()) per[i] = sft_pressure(t, p);
  });

  InteriorReport out;
  double value = -kInf, lower = -kInf, upper = -kInf;
  bool any = false;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    InteriorRow row;
    row.n = schedule[i];
    const double previous = value;
    if (per[i]) {
      value = std::max(value, per[i]->value);
      lower = std::max(lower, per[i]->lower);
      upper = std::max(upper, per[i]->upper);
    } else {
      row.empty = true;
    }
    row.value = value;
    row.lower = lower;
    row.upper = upper;
    row.increment = any ? value - previous : std::numeric_limits<double>::quiet_NaN();
    any = any || per[i].has_value();
    out.rows.push_back(row);
  }
  if (!any) throw ValidationError("interior_pressure: every truncation in the schedule is empty");
  out.estimate.value = value;
  out.estimate.lower = lower;
  out.estimate.upper = upper;
  out.estimate.method = "interior_sup";
  out.estimate.certified = std::all_of(per.begin(), per.end(), [](const auto& e) { return !e || e->certified; });
  out.estimate.params = {{"schedule", schedule}, {"final_increment", out.rows.back().increment}};
  return out;
}

GurevichReport gurevich_pressure(const ShiftSpec& spec, const Potential& p, VertexId base, std::size_t n_max,
                                 std::uint64_t n_symbols) {
  if (n_max < 1) throw ValidationError("gurevich_pressure: n_max must be >= 1");
  const auto t = truncate(spec, n_symbols);
  if (t.empty() || !t.local_index(base))
    throw ValidationError("gurevich_pressure: base " + spec.label(base) + " is not in the truncation at N=" +
                          std::to_string(n_symbols));
  const auto r = recode(t, p);
  const auto& g = r.graph;
  const std::size_t m = g.size();
  const double wmax = *std::max_element(g.weight.begin(), g.weight.end());
  std::vector<double> scale(m);
  for (std::size_t u = 0; u < m; ++u) scale[u] = std::exp(g.weight[u] - wmax);
  const auto view = g.graph.view();

  std::vector<std::vector<double>> diag(n_max);  // log (L^n)_{ss} - n wmax per base state
  for (std::uint32_t s = 0; s < m; ++s) {
    if (r.states[s][0] != base) continue;
    std::vector<double> x(m, 0.0), y(m);
    x[s] = 1.0;
    double log_scale = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t u = 0; u < m; ++u) {
        if (x[u] == 0.0) continue;
        const double a = x[u] * scale[u];
        for (auto v : view.row(u)) y[v] += a;
      }
      const double top = *std::max_element(y.begin(), y.end());
      if (top == 0.0) break;
      for (auto& v : y) v /= top;
      log_scale += std::log(top);
      x.swap(y);
      diag[n - 1].push_back(x[s] > 0.0 ? std::log(x[s]) + log_scale : -kInf);
    }
  }
  GurevichReport out;
  double best = -kInf;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double lse = logsumexp(diag[n - 1]);
    const double gn = lse == -kInf ? -kInf : lse / static_cast<double>(n) + wmax + r.constant;
    out.g.push_back(gn);
    best = std::max(best, gn);
  }
  if (best == -kInf) throw ValidationError("gurevich_pressure: no closed orbit through " + spec.label(base));
  out.estimate.value = out.estimate.lower = best;
  out.estimate.upper = kInf;
  out.estimate.method = "gurevich";
  out.estimate.params = {{"base", spec.label(base)}, {"n_max", n_max}, {"N_max", n_symbols}};
  return out;
}

double loop_entropy(const std::vector<std::uint64_t>& p_seq, std::size_t cutoff) {
  const std::size_t len = std::min(cutoff, p_seq.size());
  bool nonzero = false;
  for (std::size_t i = 0; i < len; ++i) nonzero = nonzero || p_seq[i] > 0;
  if (!nonzero) throw ValidationError("loop_entropy: no loops below the cutoff");
  const auto f = [&](double z) {
    double s = 0.0;
    for (std::size_t i = len; i-- > 0;) s = (s + static_cast<double>(p_seq[i])) * z;
    return s;
  };
  if (f(1.0) < 1.0) throw ValidationError("loop_entropy: cutoff too small (the truncated sum stays below 1)");
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 1.0 ? lo : hi) = mid;
  }
  return -std::log(0.5 * (lo + hi));
}

PressureEstimate separated_set_pressure(const TruncatedSFT& t, const Potential& p, const ShiftMetric& sm,
                                        std::size_t n, double eps) {
  if (n < 1) throw ValidationError("separated_set_pressure: n must be >= 1");
  if (!(eps > 0.0)) throw ValidationError("separated_set_pressure: eps must be > 0");
  if (t.empty()) throw ValidationError("empty subshift");
  depth_one(p, "separated_set_pressure");
  const auto& spec = t.spec();
  const std::size_t m = t.size();
  const auto& vm = sm.vertex_metric();

  // Clusters: components of the graph joining vertices at distance <= eps.
  std::vector<std::uint32_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0U);
  const auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint32_t a = 0; a < m; ++a)
    for (std::uint32_t b = a + 1; b < m; ++b)
      if (vm.rho(t.vertex(a), t.vertex(b)) <= eps) {
        const auto ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
  std::vector<std::uint32_t> group(m);
  std::vector<std::vector<std::uint32_t>> groups;
  std::map<std::uint32_t, std::uint32_t> slot;
  for (std::uint32_t u = 0; u < m; ++u) {
    auto [it, fresh] = slot.try_emplace(find(u), static_cast<std::uint32_t>(groups.size()));
    if (fresh) groups.emplace_back();
    group[u] = it->second;
    groups[it->second].push_back(u);
  }

  auto [q, c] = p.split_constant();
  std::vector<double> w(m);
  for (std::size_t u = 0; u < m; ++u) w[u] = q.value(Word{t.vertex(u)}, spec);

  // Depth-first over collapsed words; best[u] is the heaviest realization ending at u.
  constexpr std::size_t kNodeLimit = 2'000'000;
  std::size_t nodes = 0;
  std::vector<double> leaves;
  std::vector<std::vector<double>> stack(n, std::vector<double>(m, -kInf));
  const std::function<void(std::size_t)> extend = [&](std::size_t level) {
    const auto& best = stack[level];
    if (level + 1 == n) {
      leaves.push_back(*std::max_element(best.begin(), best.end()));
      return;
    }
    auto& next = stack[level + 1];
    for (std::uint32_t h = 0; h < groups.size(); ++h) {
      std::fill(next.begin(), next.end(), -kInf);
      bool any = false;
      for (std::uint32_t u = 0; u < m; ++u) {
        if (best[u] == -kInf) continue;
        for (auto v : t.successors(u))
          if (group[v] == h) {
            next[v] = std::max(next[v], best[u] + w[v]);
            any = true;
          }
      }
      if (!any) continue;
      if (++nodes > kNodeLimit)
        throw ValidationError("separated_set_pressure: more than 2e6 collapsed words; lower n or raise eps");
      extend(level + 1);
    }
  };
  for (std::uint32_t g = 0; g < groups.size(); ++g) {
    auto& first = stack[0];
    std::fill(first.begin(), first.end(), -kInf);
    for (auto u : groups[g]) first[u] = w[u];
    ++nodes;
    extend(0);
  }
  PressureEstimate out;
  out.value = logsumexp(leaves) / static_cast<double>(n) + c;
  out.lower = out.value;
  out.upper = kInf;
  out.method = "separated_sets";
  out.params = {{"n", n}, {"eps", eps}, {"theta", sm.theta()}, {"clusters", groups.size()}, {"words", leaves.size()},
                {"N", t.bound()}};
  return out;
}

PressureEstimate compactified_pressure(const CompactifiedShift& cs, const Potential& p) {
  depth_one(p, "compactified_pressure");
  auto [q, c] = p.split_constant();
  WeightedGraph g;
  g.graph = cs.merged;
  g.names = cs.names;
  const auto& spec = cs.base.spec();
  for (std::size_t u = 0; u < cs.base_size(); ++u) g.weight.push_back(q.value(Word{cs.base.vertex(u)}, spec));
  for (const auto& s : cs.boundary.symbols) {
    const auto lim = q.boundary_limit(s.id);
    if (!lim) throw ValidationError("compactified_pressure: potential declares no boundary limit for symbol '" + s.id + "'");
    g.weight.push_back(*lim);
  }
  auto est = spectral_pressure(g);
  est.value += c;
  est.lower += c;
  est.upper += c;
  est.method = "compactified";
  est.params["N"] = cs.base.bound();
  est.params["boundary_symbols"] = cs.boundary.symbols.size();
  return est;
}

void MarkovMeasure::validate() const {
  const std::size_t n = states.size();
  if (pi.size() != n || prob.size() != n || graph.size() != n)
    throw ValidationError("Markov measure: inconsistent sizes");
  const auto view = graph.view();
  double total = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    if (!(pi[u] >= 0.0)) throw ValidationError("Markov measure: negative stationary weight");
    total += pi[u];
    if (prob[u].size() != view.row(u).size()) throw ValidationError("Markov measure: row support mismatch");
    double s = 0.0;
    for (double x : prob[u]) {
      if (!(x >= 0.0)) throw ValidationError("Markov measure: negative transition probability");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ValidationError("Markov measure: row " + std::to_string(u) + " sums to " + std::to_string(s));
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("Markov measure: stationary vector does not sum to 1");
  std::vector<double> next(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    const auto row = view.row(u);
    for (std::size_t k = 0; k < row.size(); ++k) next[row[k]] += pi[u] * prob[u][k];
  }
  for (std::size_t v = 0; v < n; ++v)
    if (std::abs(next[v] - pi[v]) > 1e-10) throw ValidationError("Markov measure: pi P differs from pi");
}

namespace {

// The Perron construction only needs irreducibility.
EquilibriumData irreducible_equilibrium(const TruncatedSFT& t, const Potential& p) {
  const auto r = recode(t, p);
  const auto& g = r.graph;
  const auto right = perron_vector(g, false);
  const auto left = perron_vector(g, true);
  const std::size_t n = g.size();
  const double wmax = *std::max_element(g.weight.begin(), g.weight.end());

  EquilibriumData out;
  out.pressure = right.log_lambda + r.constant;
  out.left = left.vec;
  out.right = right.vec;
  auto& m = out.measure;
  m.states = r.states;
  m.graph = g.graph;
  m.depth = r.depth;
  const auto view = g.graph.view();
  const double log_lambda = right.log_lambda - wmax;
  m.prob.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    const double a = g.weight[u] - wmax - log_lambda - right.log_vec[u];
    double s = 0.0;
    for (auto v : view.row(u)) {
      m.prob[u].push_back(std::exp(a + right.log_vec[v]));
      s += m.prob[u].back();
    }
    for (auto& x : m.prob[u]) x /= s;
  }
  m.pi.resize(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < n; ++u) top = std::max(top, left.log_vec[u] + right.log_vec[u]);
  double z = 0.0;
  for (std::size_t u = 0; u < n; ++u) z += m.pi[u] = std::exp(left.log_vec[u] + right.log_vec[u] - top);
  for (auto& x : m.pi) x /= z;
  m.validate();
  return out;
}

}  // namespace

EquilibriumData equilibrium_measure(const TruncatedSFT& t, const Potential& p) {
  if (t.empty()) throw ValidationError("empty subshift");
  if (!is_topologically_mixing(t)) throw ValidationError("equilibrium_measure: the truncation is not topologically mixing");
  return irreducible_equilibrium(t, p);
}

FreeEnergy measure_free_energy(const MarkovMeasure& m, const Potential& p, const ShiftSpec& spec) {
  if (std::max(p.depth(), 1) > m.depth)
    throw ValidationError("measure_free_energy: potential depth exceeds the measure's block length");
  FreeEnergy out;
  for (std::size_t u = 0; u < m.states.size(); ++u) {
    double h = 0.0;
    for (double x : m.prob[u])
      if (x > 0.0) h -= x * std::log(x);
    out.entropy += m.pi[u] * h;
    out.integral += m.pi[u] * p.value(m.states[u], spec);
  }
  return out;
}

MarkovMeasure sample_markov_measure(const Recoded& r, std::uint64_t seed) {
  const std::size_t n = r.graph.size();
  if (n > 2000) throw ValidationError("sample_markov_measure: more than 2000 states");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  MarkovMeasure m;
  m.states = r.states;
  m.graph = r.graph.graph;
  m.depth = r.depth;
  const auto view = m.graph.view();
  m.prob.resize(n);
  Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t u = 0; u < n; ++u) {
    double s = 0.0;
    for (std::size_t k = 0; k < view.row(u).size(); ++k) {
      m.prob[u].push_back(expo(rng));
      s += m.prob[u].back();
    }
    const auto row = view.row(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      m.prob[u][k] /= s;
      a(static_cast<Eigen::Index>(row[k]), static_cast<Eigen::Index>(u)) += m.prob[u][k];
    }
  }
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  const auto last = static_cast<Eigen::Index>(n - 1);
  a.row(last).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  rhs(last) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  m.pi.resize(n);
  double total = 0.0;
  for (std::size_t u = 0; u < n; ++u) total += m.pi[u] = std::max(0.0, pi(static_cast<Eigen::Index>(u)));
  for (auto& x : m.pi) x /= total;
  return m;
}

VariationalReport variational_witness_check(const TruncatedSFT& t, const Potential& p, std::size_t samples,
                                            std::uint64_t seed) {
  if (t.empty()) throw ValidationError("empty subshift");
  if (!is_irreducible(t)) throw ValidationError("variational_witness_check: the truncation is not irreducible");
  VariationalReport out;
  const auto eq = irreducible_equilibrium(t, p);
  out.pressure = eq.pressure;
  out.equilibrium_free_energy = measure_free_energy(eq.measure, p, t.spec()).total();
  out.equilibrium_attains = std::abs(out.equilibrium_free_energy - out.pressure) <= 1e-8;
  const auto r = recode(t, p);
  std::mt19937_64 seeds(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto m = sample_markov_measure(r, seeds());
    const double f = measure_free_energy(m, p, t.spec()).total();
    out.max_sampled = std::max(out.max_sampled, f);
    out.worst_excess = std::max(out.worst_excess, f - out.pressure);
    ++out.samples;
  }
  out.samples_below = out.worst_excess <= 1e-9;
  return out;
}

EquidistributionResult boundary_equidistribution(const ShiftSpec& spec, const SectorDecomposition& dec,
                                                 const BoundaryChain& chain, std::size_t k, std::size_t n,
                                                 const Potential& p, const std::string& symbol) {
  if (k < 1 || k > dec.levels.size()) throw ValidationError("boundary_equidistribution: level out of range");
  if (n < 1) throw ValidationError("boundary_equidistribution: n must be >= 1");
  if (chain.sectors.size() != dec.levels.size()) throw ValidationError("boundary_equidistribution: chain depth mismatch");
  depth_one(p, "boundary_equidistribution");
  const auto limit = p.boundary_limit(symbol);
  if (!limit) throw ValidationError("boundary_equidistribution: potential declares no limit at '" + symbol + "'");
  const auto& lv = dec.levels[k - 1];
  const auto& members = lv.sectors.at(chain.sectors[k - 1]).members;
  const std::uint64_t cutoff = lv.cutoff;
  const auto head = truncate(spec, cutoff);
  if (head.empty()) throw ValidationError("boundary_equidistribution: empty head truncation");

  EquidistributionResult out;
  out.mixing_bound = mixing_bound(head);
  out.limit = *limit;
  for (auto v : members) out.eps_k = std::max(out.eps_k, std::abs(p.value(Word{v}, spec) - *limit));

  // Paths of exactly n sector vertices, starting where the head can enter.
  const std::size_t s = members.size();
  const auto local = [&](VertexId v) -> std::optional<std::uint32_t> {
    auto it = std::lower_bound(members.begin(), members.end(), v);
    if (it == members.end() || *it != v) return std::nullopt;
    return static_cast<std::uint32_t>(it - members.begin());
  };
  std::vector<std::vector<std::uint32_t>> succ(s);
  std::vector<bool> entry(s, false);
  for (std::uint32_t i = 0; i < s; ++i)
    for (auto v : spec.successors(members[i], dec.n_max))
      if (auto j = local(v)) succ[i].push_back(*j);
  for (std::size_t h = 0; h < head.size(); ++h)
    for (auto v : spec.successors(head.vertex(h), dec.n_max))
      if (auto j = local(v)) entry[*j] = true;
  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<std::uint32_t>> from(n, std::vector<std::uint32_t>(s, none));
  for (std::uint32_t i = 0; i < s; ++i)
    if (entry[i]) from[0][i] = i;
  for (std::size_t step = 1; step < n; ++step)
    for (std::uint32_t i = 0; i < s; ++i) {
      if (from[step - 1][i] == none) continue;
      for (auto j : succ[i])
        if (from[step][j] == none) from[step][j] = i;
    }

  // Shortest head path from a successor of the exit to a predecessor of the entry.
  const auto head_path = [&](VertexId exit, VertexId enter) -> std::optional<Word> {
    std::vector<std::int64_t> prev(head.size(), -2);
    std::deque<std::size_t> queue;
    for (auto v : spec.successors(exit, cutoff))
      if (auto h = head.local_index(v); h && prev[*h] == -2) {
        prev[*h] = -1;
        queue.push_back(*h);
      }
    while (!queue.empty()) {
      const auto h = queue.front();
      queue.pop_front();
      if (spec.allowed(head.vertex(h), enter)) {
        Word path;
        for (std::int64_t at = static_cast<std::int64_t>(h); at >= 0; at = prev[static_cast<std::size_t>(at)])
          path.push_back(head.vertex(static_cast<std::size_t>(at)));
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (auto v : head.successors(h))
        if (prev[v] == -2) {
          prev[v] = static_cast<std::int64_t>(h);
          queue.push_back(v);
        }
    }
    return std::nullopt;
  };

  std::optional<Word> best;
  for (std::uint32_t end = 0; end < s; ++end) {
    if (from[n - 1][end] == none) continue;
    Word path(n);
    std::uint32_t at = end;
    for (std::size_t step = n; step-- > 0;) {
      path[step] = members[at];
      at = from[step][at];
    }
    auto connect = head_path(path.back(), path.front());
    if (!connect) continue;
    if (!best || connect->size() + n < best->size()) {
      path.insert(path.end(), connect->begin(), connect->end());
      best = std::move(path);
      if (best->size() == n + 1) break;
    }
  }
  if (!best) throw ValidationError("boundary_equidistribution: no periodic orbit through the sector was found");
  out.orbit = std::move(*best);
  out.sector_iterates = n;
  out.head_iterates = out.orbit.size() - n;
  out.integral = birkhoff_sum(p, PeriodicOrbit{out.orbit}, spec) / static_cast<double>(out.orbit.size());
  out.bound = out.eps_k + static_cast<double>(out.mixing_bound + 2) / static_cast<double>(n) * p.sup_norm();
  out.deviation = std::abs(out.integral - out.limit);
  out.bound_holds = out.deviation <= out.bound && out.head_iterates <= static_cast<std::size_t>(out.mixing_bound) + 2;
  return out;
}

}  // namespace cmspress
