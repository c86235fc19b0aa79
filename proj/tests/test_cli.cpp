#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cmspress/cli.hpp"
#include "cmspress/gallery.hpp"

using namespace cmspress;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cmspress");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("cmspress_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

const std::string kRenewal = R"({"kind":"generator","name":"renewal","params":{}})";

}  // namespace

TEST_CASE("interior pressure on renewal converges to log 2") {
  const Scratch s;
  const auto spec = s.write("renewal.json", kRenewal);
  const auto r = run({"pressure", "--spec", spec, "--method", "interior", "--schedule", "8,16,32,64,128"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"N", "value", "lower", "upper", "increment"});
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double v = std::stod(rows[i][1]);
    CHECK(v >= prev);
    CHECK(v <= std::log(2.0) + 1e-12);
    prev = v;
  }
  CHECK(prev >= std::log(2.0) - 1e-3);
}

TEST_CASE("other pressure methods") {
  const Scratch s;
  const auto spec = s.write("renewal.json", kRenewal);
  const auto zero = s.write("zero.json", R"({"kind":"constant","value":0})");
  for (const char* m : {"spectral", "compactified", "separated", "gurevich"}) {
    CAPTURE(m);
    const auto r = run({"pressure", "--spec", spec, "--potential", zero, "--method", m, "--N", "16", "--n", "6"});
    CHECK(r.code == 0);
    CHECK(csv(r.out).size() == 2);
  }
  const auto loops = s.write("loops.json", R"({"kind":"generator","name":"loop_system","params":{}})");
  const auto r = run({"pressure", "--spec", loops, "--method", "loop", "--cutoff", "60"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(std::stod(csv(r.out)[1][1]) - std::log(2.0)) < 1e-9);
  CHECK(run({"pressure", "--spec", spec, "--method", "loop"}).code == 2);
}

TEST_CASE("sector certificates") {
  const Scratch s;
  const auto zig = s.write("zig.json", R"({"kind":"generator","name":"zigzag_2","params":{}})");
  auto r = run({"sectors", "--spec", zig});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["certificate"]["verdict"] == "not_sectorial");
  CHECK_FALSE(j["certificate"]["witness"].get<std::string>().empty());

  const auto renewal = s.write("renewal.json", kRenewal);
  r = run({"sectors", "--spec", renewal, "--cutoffs", "4,16,64", "--nmax", "512"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["certificate"]["verdict"] == "sectorial");
}

TEST_CASE("boundary report") {
  const Scratch s;
  const auto spec = s.write("renewal.json", kRenewal);
  const auto r = run({"boundary", "--spec", spec});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["lemma_checks"]["passed"] == true);
  CHECK(j["boundary_entropy"] == 0.0);
  CHECK(j["sector_verdict"] == "sectorial");
}

TEST_CASE("validation errors exit with 2") {
  const Scratch s;
  const auto bad = s.write("bad.json", "{ not json");
  auto r = run({"pressure", "--spec", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("--spec") != std::string::npos);

  const auto missing = s.write("missing.json", R"({"name":"renewal"})");
  r = run({"pressure", "--spec", missing});
  CHECK(r.code == 2);
  CHECK(r.err.find("kind") != std::string::npos);

  r = run({"pressure", "--spec", s.path("nope.json")});
  CHECK(r.code == 2);
  CHECK(run({"pressure"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"gallery", "export", "--name", "cantor"}).code == 2);
  const auto spec = s.write("renewal.json", kRenewal);
  CHECK(run({"pressure", "--spec", spec, "--schedule", "8,x"}).code == 2);
  CHECK(run({"pressure", "--spec", spec, "--schedule", "8,1000000000"}).code == 2);
  const auto expl = s.write("two.json", R"({"kind":"explicit","n":2,"edges":[[1,1],[2,2]]})");
  CHECK(run({"sectors", "--spec", expl}).code == 2);
}

TEST_CASE("outputs are deterministic") {
  const Scratch s;
  const auto spec = s.write("renewal.json", kRenewal);
  const std::vector<std::string> args{"pressure", "--spec", spec, "--schedule", "8,16,32", "--seed", "9"};
  const auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "4"});
  CHECK(run(threaded).out == a.out);
}

TEST_CASE("gallery list and export round-trip") {
  const Scratch s;
  auto r = run({"gallery", "list"});
  REQUIRE(r.code == 0);
  std::string names;
  for (const auto& n : gallery_names()) names += n + "\n";
  CHECK(r.out == names);

  const auto path = s.path("renewal.json");
  REQUIRE(run({"gallery", "export", "--name", "renewal", "--out", path}).code == 0);
  const auto j = json::parse(slurp(path));
  CHECK(j == to_json(instantiate("renewal")));
  CHECK(ShiftSpec::from_json(j["spec"]).to_json() == j["spec"]);

  r = run({"gallery", "export", "--name", "loop_system", "--params", R"({"p":[0,2]})"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["spec"]["params"]["p"] == json::array({0, 2}));
}

TEST_CASE("diff-scan finds the reducible kink") {
  const Scratch s;
  const auto spec = s.write("two.json", R"({"kind":"explicit","n":2,"edges":[[1,1],[2,2]]})");
  const auto phi = s.write("phi.json", R"({"kind":"constant","value":0})");
  const auto psi = s.write("psi.json", R"({"kind":"locally_constant","depth":1,"table":{"1":1}})");
  const auto out = s.path("curve.csv");
  for (const auto& grid : {std::vector<std::string>{"--grid", "-1:1:0.01"}, std::vector<std::string>{"--grid=-1:1:0.01"}}) {
    std::vector<std::string> args{"diff-scan", "--spec", spec, "--phi", phi, "--psi", psi, "--out", out};
    args.insert(args.end(), grid.begin(), grid.end());
    const auto r = run(args);
    REQUIRE(r.code == 0);
    double at = 1.0, left = 1.0, right = 0.0;
    REQUIRE(std::sscanf(r.err.c_str(), "kink at t=%lf slopes (%lf, %lf)", &at, &left, &right) == 3);
    CHECK(std::abs(at) < 1e-6);
    CHECK(std::abs(left) < 1e-6);
    CHECK(std::abs(right - 1.0) < 1e-6);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    const auto rows = csv(slurp(out));
    REQUIRE(rows.size() == 202);
    CHECK(rows[0] == std::vector<std::string>{"t", "P", "d2P"});
    CHECK(rows[1][2] == "nan");
    CHECK(std::stod(rows.back()[1]) == doctest::Approx(1.0));
  }
  CHECK(run({"diff-scan", "--spec", spec, "--phi", phi, "--psi", psi, "--grid", "1:0:0.1"}).code == 2);
}

TEST_CASE("explore-conjecture reports without a verdict") {
  const auto r = run({"explore-conjecture", "--names", "zigzag_2", "--N", "32"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["name"] == "zigzag_2");
  CHECK_FALSE(j.contains("verdict"));
}
