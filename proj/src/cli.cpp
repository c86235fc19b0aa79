#include "cmspress/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cmspress/boundary.hpp"
#include "cmspress/differentiability.hpp"
#include "cmspress/error.hpp"
#include "cmspress/gallery.hpp"
#include "cmspress/kernels.hpp"
#include "cmspress/pressure.hpp"
#include "cmspress/sectors.hpp"

namespace cmspress::cli {

namespace {

json read_json(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string(what) + ": cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": '" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::uint64_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": '" + item + "' is not a nonnegative integer");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  double v[3];
  std::stringstream ss(text);
  std::string item;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, item, ':')) throw ValidationError("--grid: expected lo:hi:step");
    try {
      std::size_t used = 0;
      v[i] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--grid: '" + item + "' is not a number");
    }
  }
  return uniform_grid(v[0], v[1], v[2]);
}

ShiftSpec load_spec(const std::string& path) { return ShiftSpec::from_json(read_json(path, "--spec")); }

Potential load_potential(const std::string& path) {
  if (path.empty()) return Potential::constant(0.0);
  return Potential::from_json(read_json(path, "--potential"));
}

std::optional<GalleryEntry> gallery_entry_for(const ShiftSpec& spec) {
  for (const auto& n : gallery_names())
    if (n == spec.name() && !spec.is_explicit()) return instantiate(n, spec.generator().params());
  return std::nullopt;
}

// Metric from file, or the gallery metric of the spec's generator.
MetricPtr load_metric(const std::string& path, const ShiftSpec& spec, double* theta) {
  MetricPtr vm;
  if (!path.empty()) {
    const json j = read_json(path, "--metric");
    vm = make_metric(j);
    if (theta && j.contains("theta")) {
      if (!j["theta"].is_number()) throw ValidationError("metric spec: 'theta' must be a number");
      *theta = j["theta"].get<double>();
    }
  } else if (auto e = gallery_entry_for(spec)) {
    vm = e->metric;
  } else {
    throw ValidationError("--metric is required for shifts outside the gallery");
  }
  check_compatible(*vm, spec);
  return vm;
}

struct Common {
  std::string spec, potential, metric, boundary, out;
};

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pressure of countable Markov shifts and their compactifications"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed_flag;
  int threads = 1;
  app.add_option("--seed", seed_flag, "64-bit seed (falls back to CMSPRESS_SEED, then 0)");
  app.add_option("--threads", threads, "worker threads for independent evaluations")->check(CLI::PositiveNumber);

  Common c;

  // pressure
  auto* pressure = app.add_subcommand("pressure", "pressure estimates (CSV: N,value,lower,upper,increment)");
  std::string method = "interior", schedule = "4,8,16,32,64", base;
  std::uint64_t n_trunc = 0, n_symbols = 64;
  std::size_t periods = 20, words = 8, cutoff = 60;
  double eps = 0.125, theta = 0.5;
  pressure->add_option("--spec", c.spec, "shift spec JSON")->required();
  pressure->add_option("--potential", c.potential, "potential JSON (default 0)");
  pressure->add_option("--method", method)
      ->check(CLI::IsMember({"interior", "spectral", "compactified", "separated", "gurevich", "loop"}));
  pressure->add_option("--schedule", schedule, "truncation sizes for --method interior");
  pressure->add_option("--N", n_trunc, "truncation size (default: last schedule entry)");
  pressure->add_option("--boundary", c.boundary, "boundary model JSON for --method compactified");
  pressure->add_option("--metric", c.metric, "metric JSON for --method separated");
  pressure->add_option("--theta", theta, "shift metric parameter")->check(CLI::Range(0.0, 1.0));
  pressure->add_option("--eps", eps, "separation scale");
  pressure->add_option("--n", words, "word length for --method separated");
  pressure->add_option("--base", base, "base vertex label for --method gurevich (default: first vertex)");
  pressure->add_option("--periods", periods, "largest period for --method gurevich");
  pressure->add_option("--nmax", n_symbols, "symbols allowed for --method gurevich");
  pressure->add_option("--cutoff", cutoff, "loop-length cutoff for --method loop");
  pressure->add_option("--out", c.out, "output file (default stdout)");

  // sectors
  auto* sectors = app.add_subcommand("sectors", "sector decomposition and its certificate (JSON)");
  std::string cutoffs_text;
  std::uint64_t nmax = 0;
  sectors->add_option("--spec", c.spec)->required();
  sectors->add_option("--metric", c.metric);
  sectors->add_option("--cutoffs", cutoffs_text, "comma-separated N_1 < N_2 < ...");
  sectors->add_option("--nmax", nmax, "working truncation");
  sectors->add_option("--out", c.out);

  // boundary
  auto* boundary = app.add_subcommand("boundary", "boundary model and lemma checks (JSON)");
  std::uint64_t base_n = 64;
  boundary->add_option("--spec", c.spec)->required();
  boundary->add_option("--metric", c.metric);
  boundary->add_option("--cutoffs", cutoffs_text);
  boundary->add_option("--nmax", nmax);
  boundary->add_option("--N", base_n, "base truncation of the compactified shift");
  boundary->add_option("--out", c.out);

  // diff-scan
  auto* diff = app.add_subcommand("diff-scan", "pressure along phi + t psi (CSV: t,P,d2P); kinks on stderr");
  std::string phi_path, psi_path, grid_text = "-1:1:0.01";
  double tol = 1e-6;
  std::uint64_t diff_n = 0;
  diff->add_option("--spec", c.spec)->required();
  diff->add_option("--phi", phi_path)->required();
  diff->add_option("--psi", psi_path)->required();
  diff->add_option("--grid", grid_text, "lo:hi:step");
  diff->add_option("--tol", tol);
  diff->add_option("--N", diff_n, "truncation size (default: the whole alphabet when finite, else 16)");
  diff->add_option("--out", c.out);

  // gallery
  auto* gallery = app.add_subcommand("gallery", "catalogue of example shifts");
  gallery->require_subcommand(1);
  auto* list = gallery->add_subcommand("list", "entry names");
  auto* exp = gallery->add_subcommand("export", "entry as JSON");
  std::string gallery_name, gallery_params = "{}";
  exp->add_option("--name", gallery_name)->required();
  exp->add_option("--params", gallery_params, "generator parameters as JSON");
  exp->add_option("--out", c.out);

  // explore-conjecture
  auto* explore = app.add_subcommand("explore-conjecture",
                                     "interior vs compactified pressure on the non-sectorial examples (no verdict)");
  std::vector<std::string> names{"loop_system", "circle_loops", "zigzag_2", "zigzag_3", "birth_death_parity"};
  std::uint64_t explore_n = 64;
  explore->add_option("--names", names);
  explore->add_option("--potential", c.potential);
  explore->add_option("--N", explore_n);
  explore->add_option("--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::uint64_t seed = 0;
  if (seed_flag) {
    seed = *seed_flag;
  } else if (const char* env = std::getenv("CMSPRESS_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: CMSPRESS_SEED='" << env << "' is not an unsigned integer\n";
      return 2;
    }
  }
  (void)seed;  // reserved: no subcommand samples yet
  kernels::set_threads(threads);

  try {
    if (*pressure) {
      const auto spec = load_spec(c.spec);
      const auto p = load_potential(c.potential);
      const auto sched = parse_list(schedule, "--schedule");
      const std::uint64_t n = n_trunc ? n_trunc : sched.back();
      std::ostringstream csv;
      csv << "N,value,lower,upper,increment\n";
      const auto row = [&](std::uint64_t N, const PressureEstimate& e) {
        csv << N << ',' << number(e.value) << ',' << number(e.lower) << ',' << number(e.upper) << ",nan\n";
      };
      if (method == "interior") {
        const auto rep = interior_pressure(spec, p, sched);
        for (const auto& r : rep.rows)
          csv << r.n << ',' << number(r.value) << ',' << number(r.lower) << ',' << number(r.upper) << ','
              << number(r.increment) << '\n';
      } else if (method == "spectral") {
        row(n, sft_pressure(truncate(spec, n), p));
      } else if (method == "compactified") {
        const auto t = truncate(spec, n);
        BoundaryModel model;
        if (!c.boundary.empty()) {
          model = BoundaryModel::from_json(read_json(c.boundary, "--boundary"), spec);
        } else if (auto a = analytic_boundary(spec)) {
          model = *a;
        } else {
          throw ValidationError("--boundary is required: the shift has no analytic boundary model");
        }
        row(n, compactified_pressure(compactify(t, model), p));
      } else if (method == "separated") {
        const auto vm = load_metric(c.metric, spec, &theta);
        row(n, separated_set_pressure(truncate(spec, n), p, ShiftMetric(vm, theta), words, eps));
      } else if (method == "gurevich") {
        const VertexId b = base.empty() ? VertexId{1} : spec.parse_label(base);
        const auto rep = gurevich_pressure(spec, p, b, periods, n_symbols);
        row(n_symbols, rep.estimate);
      } else {  // loop
        if (spec.name() != "loop_system" && spec.name() != "circle_loops")
          throw ValidationError("--method loop needs a loop_system or circle_loops spec");
        const json params = spec.generator().params();
        const auto pv = params.at("p").get<std::vector<std::uint64_t>>();
        const auto tail = params.at("p_tail").get<std::uint64_t>();
        std::vector<std::uint64_t> seq(cutoff);
        for (std::size_t i = 0; i < cutoff; ++i) seq[i] = i < pv.size() ? pv[i] : tail;
        const double h = loop_entropy(seq, cutoff);
        PressureEstimate e;
        e.value = e.lower = e.upper = h;
        row(cutoff, e);
      }
      emit(csv.str(), c.out, out);
      return 0;
    }

    const auto decomposition = [&](const ShiftSpec& spec) {
      const auto entry = gallery_entry_for(spec);
      const auto vm = load_metric(c.metric, spec, nullptr);
      std::vector<std::uint64_t> cuts = entry ? entry->cutoffs : std::vector<std::uint64_t>{4, 16, 64};
      if (!cutoffs_text.empty()) cuts = parse_list(cutoffs_text, "--cutoffs");
      std::uint64_t n = nmax ? nmax : (entry ? entry->n_max : 1024);
      return decompose(spec, vm, cuts, n);
    };

    if (*sectors) {
      const auto spec = load_spec(c.spec);
      const auto dec = decomposition(spec);
      emit(dump(to_json(dec, verify(dec))), c.out, out);
      return 0;
    }

    if (*boundary) {
      const auto spec = load_spec(c.spec);
      const auto dec = decomposition(spec);
      const auto cert = verify(dec);
      const auto probe = finite_entropy_probe(spec, dec.n_max);
      if (!probe.passed) throw ValidationError("finite-entropy probe failed: " + probe.diagnostic);
      const auto model = build_boundary_model(spec, dec);
      const auto cs = compactify(truncate(spec, base_n), model);
      const bool sectorial = cert.verdict == SectorVerdict::sectorial;
      const auto checks = lemma_checks(cs, sectorial);
      json lemmas = {{"no_excursion", checks.no_excursion.pass}, {"within_nonempty", checks.within_nonempty}};
      if (!checks.no_excursion.witness.empty()) lemmas["excursion_witness"] = checks.no_excursion.witness;
      if (checks.within_identity) lemmas["within_identity"] = *checks.within_identity;
      lemmas["passed"] = checks.passed();
      const double h = boundary_entropy(model);
      emit(dump({{"spec", spec.to_json()},
                 {"sector_verdict", to_string(cert.verdict)},
                 {"mode", analytic_boundary(spec) ? "analytic" : "heuristic"},
                 {"model", model.to_json(spec)},
                 {"boundary_entropy", std::isinf(h) ? json("-inf") : json(h)},
                 {"finite_entropy_probe", probe.passed},
                 {"base_truncation", base_n},
                 {"lemma_checks", lemmas}}),
           c.out, out);
      return 0;
    }

    if (*diff) {
      const auto spec = load_spec(c.spec);
      const auto phi = Potential::from_json(read_json(phi_path, "--phi"));
      const auto psi = Potential::from_json(read_json(psi_path, "--psi"));
      const std::uint64_t n = diff_n ? diff_n : spec.alphabet_size().value_or(16);
      const auto curve = pressure_curve(truncate(spec, n), phi, psi, parse_grid(grid_text));
      const auto d2 = curve.second_differences();
      std::ostringstream csv;
      csv << "t,P,d2P\n";
      for (std::size_t i = 0; i < curve.grid.size(); ++i)
        csv << number(curve.grid[i]) << ',' << number(curve.values[i]) << ',' << number(d2[i]) << '\n';
      emit(csv.str(), c.out, out);
      for (const auto& k : kink_scan(curve, tol).kinks)
        err << "kink at t=" << number(k.location) << " slopes (" << number(k.left_slope) << ", "
            << number(k.right_slope) << ")\n";
      return 0;
    }

    if (*gallery) {
      if (*list) {
        for (const auto& n : gallery_names()) out << n << '\n';
        return 0;
      }
      json params;
      try {
        params = json::parse(gallery_params);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("--params is not valid JSON (") + e.what() + ")");
      }
      emit(dump(to_json(instantiate(gallery_name, params))), c.out, out);
      return 0;
    }

    if (*explore) {
      const auto p = load_potential(c.potential);
      json rows = json::array();
      for (const auto& name : names) {
        const auto e = instantiate(name);
        const auto t = truncate(e.spec, explore_n);
        const auto interior = interior_pressure(e.spec, p, {explore_n / 4, explore_n / 2, explore_n});
        const auto compact = compactified_pressure(compactify(t, e.boundary), p);
        rows.push_back({{"name", name},
                        {"N", explore_n},
                        {"interior", interior.estimate.value},
                        {"compactified", compact.value},
                        {"difference", compact.value - interior.estimate.value},
                        {"boundary_entropy", e.boundary_entropy}});
      }
      emit(dump({{"note", "dual estimates only; no verdict is drawn"}, {"rows", rows}}), c.out, out);
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::bad_alloc&) {
    err << "numeric error: out of memory\n";
    return 3;
  }
  return 0;
}

}  // namespace cmspress::cli
