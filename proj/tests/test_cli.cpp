#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hdmax/cli.hpp"
#include "json.hpp"

using namespace hdmax::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_args(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / "hdmax-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("range and list parsing") {
  const auto r = parse_r_spec("0:0.1:1");
  REQUIRE(r.size() == 11);
  CHECK(r.back() == doctest::Approx(1.0));
  CHECK(parse_r_spec("0.5, 2,3").size() == 3);
  CHECK(parse_int_list("3,10") == std::vector<int>{3, 10});
  CHECK_THROWS_AS(parse_r_spec("1:0:2"), hdmax::ParameterError);
  CHECK_THROWS_AS(parse_r_spec("1:2"), hdmax::ParameterError);
  CHECK_THROWS_AS(parse_double_list("x"), hdmax::ParameterError);
  CHECK_THROWS_AS(parse_int_list("3.5"), hdmax::ParameterError);
  CHECK_THROWS_AS(parse_int_list(""), hdmax::ParameterError);
}

TEST_CASE("rendering") {
  Table t{{"a", "b", "c", "e"}, {{1.0 / 3.0, std::string("x"), Cell{}, true}}};
  CHECK(render(t, "csv") == "a,b,c,e\n0.33333333333333331,x,,true\n");
  const auto j = nlohmann::json::parse(render(t, "json"));
  CHECK(j[0]["a"].get<double>() == 1.0 / 3.0);
  CHECK(j[0]["c"].is_null());
  CHECK(j[0]["e"].get<bool>());
  CHECK_THROWS_AS(render(t, "xml"), hdmax::ParameterError);
}

TEST_CASE("tolerances are echoed into manifests") {
  const auto m = tolerances().as_map();
  CHECK(m.at("quadrature_abs_tol") == 1e-13);
  CHECK(m.at("mc_sigma") == 3.0);
  CHECK(tolerances().quadrature().nodes_per_panel == 16);
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.command = "mc gauss";
  m.parameters = {{"d", "5"}, {"n", "1000"}};
  m.seed = 99;
  m.tolerance_set = {{"x", 0.5}};
  const auto back = manifest_from_json(to_json(m));
  CHECK(back.command == m.command);
  CHECK(back.parameters == m.parameters);
  CHECK(back.seed == 99);
  CHECK(back.tolerance_set == m.tolerance_set);
  CHECK_THROWS(manifest_from_json("{}"));
  CHECK_THROWS(manifest_from_json("not json"));
}

TEST_CASE("symbols command") {
  const auto man = scratch("symbols.json");
  const auto r = run_args({"symbols", "--d", "3", "--r", "0,0.25", "--manifest", man.string()});
  CHECK(r.code == kOk);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "d,r,symbol,value,error_estimate,method");
  int rows = 0;
  for (std::string l; std::getline(lines, l);)
    ++rows;
  CHECK(rows == 6);
  CHECK(r.out.find("3,0.25,mu,0.6366197723675") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto man = scratch("codes.json").string();
  CHECK(run_args({"symbols", "--d", "2", "--r", "1", "--manifest", man}).code == kUsageError);
  CHECK(run_args({"symbols", "--r", "1", "--manifest", man}).code == kUsageError);
  CHECK(run_args({"bogus"}).code == kUsageError);
  CHECK(run_args({"mc", "chisq", "--d", "20", "--alpha", "0.8", "--manifest", man}).code ==
        kUsageError);
  CHECK(run_args({"radial", "spd", "--p", "1.5", "--d", "3", "--manifest", man}).code ==
        kUsageError);
  CHECK(run_args({"symbols", "--d", "3", "--r", "1", "--format", "xml"}).code == kUsageError);
  CHECK(run_args({"replay", scratch("missing.json").string()}).code == kUsageError);
  CHECK(run_args({"--help"}).code == kOk);
}

TEST_CASE("radial commands flag no invariant violations at their defaults") {
  const auto man = scratch("radial.json").string();
  for (const char *which : {"gauss1d", "gaussdd", "indicator", "homog", "constants"}) {
    CAPTURE(which);
    const auto r = run_args({"radial", which, "--manifest", man});
    CHECK(r.code == kOk);
    CHECK(r.err.empty());
  }
  CHECK(run_args({"radial", "spd", "--p", "4,2", "--d", "3,4", "--manifest", man}).code == kOk);
}

TEST_CASE("Monte Carlo output is deterministic and independent of workers") {
  const auto man = scratch("mc.json").string();
  const auto a = run_args({"mc", "sphere", "--d", "8", "--r", "0.5,1", "--n", "5000",
                           "--seed", "3", "--manifest", man});
  const auto b = run_args({"mc", "sphere", "--d", "8", "--r", "0.5,1", "--n", "5000",
                           "--seed", "3", "--workers", "3", "--manifest", man});
  CHECK(a.code == kOk);
  CHECK(a.out == b.out);
  const auto c = run_args({"mc", "sphere", "--d", "8", "--r", "0.5,1", "--n", "5000",
                           "--seed", "4", "--manifest", man});
  CHECK(a.out != c.out);
}

TEST_CASE("replay reproduces output byte for byte") {
  const auto out = scratch("chisq.csv");
  const auto again = scratch("chisq.replay.csv");
  fs::remove(fs::path(out.string() + ".manifest.json"));
  const auto first = run_args({"mc", "chisq", "--d", "30", "--alpha", "0.25", "--n", "20000",
                               "--seed", "8", "--out", out.string()});
  REQUIRE(first.code == kOk);
  REQUIRE(fs::exists(out.string() + ".manifest.json"));
  const auto m = read_manifest(out.string() + ".manifest.json");
  CHECK(m.command == "mc chisq");
  CHECK(m.seed == 8);
  CHECK(m.parameters.at("alpha") == "0.25");
  CHECK(m.tool_version == kToolVersion);
  const auto second =
      run_args({"replay", out.string() + ".manifest.json", "--out", again.string()});
  CHECK(second.code == kOk);
  CHECK(slurp(out) == slurp(again));
  CHECK(!slurp(out).empty());
}

TEST_CASE("dispatch is deterministic") {
  Params p{{"p", "1.5,2"}, {"format", "csv"}};
  const auto a = dispatch("radial gauss1d", p, 1);
  const auto b = dispatch("radial gauss1d", p, 2);
  CHECK(render(a.table, "csv") == render(b.table, "csv"));
  CHECK_THROWS_AS(dispatch("radial nope", p, 1), hdmax::ParameterError);
}

TEST_CASE("the standalone tool runs") {
  const auto out = scratch("tool.csv");
  const std::string cmd = std::string(HDMAX_TOOL_PATH) + " radial constants --out " +
                          out.string() + " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(out).rfind("quantity,argument,value\n", 0) == 0);
}
