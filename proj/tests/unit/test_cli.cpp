#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "discflux/cli.hpp"

using namespace discflux;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "discflux");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("discflux_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number tags") {
    CHECK(number_tag(1.0) == "1");
    CHECK(number_tag(0.5) == "0p5");
    CHECK(number_tag(-2.25) == "m2p25");
  }

  TEST_CASE("solve writes every artifact") {
    const auto dir = fresh_dir("solve");
    const auto r = cli({"solve", "--scenario", "single_flux_burgers", "--t", "1", "--n", "400", "--out", dir.string()});
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(dir / "field_t1_n400.csv"));
    CHECK(fs::exists(dir / "profile_t1_n400.csv"));
    CHECK(fs::exists(dir / "fronts_t1_n400.json"));
    CHECK(fs::exists(dir / "scenario.json"));
    const auto fronts = nlohmann::json::parse(slurp(dir / "fronts_t1_n400.json"));
    CHECK(fronts.contains("R"));
    CHECK(slurp(dir / "field_t1_n400.csv").rfind("x,u,foot_type,foot_value\n", 0) == 0);
  }

  TEST_CASE("solve on three grids") {
    const auto dir = fresh_dir("grids");
    const auto r = cli({"solve", "--scenario", "counterexample_ghoshal", "--t", "1", "--n", "64,128,256", "--out",
                        dir.string()});
    CHECK(r.code == kExitOk);
    for (int n : {64, 128, 256}) CHECK(fs::exists(dir / ("field_t1_n" + std::to_string(n) + ".csv")));
  }

  TEST_CASE("bad connection is a validation error") {
    const auto dir = fresh_dir("badB");
    const auto r = cli({"solve", "--scenario", "twoflux_noncritical", "--B", "0.5", "--out", dir.string()});
    CHECK(r.code == kExitConfig);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "InvalidConnection");
    CHECK(j["exit_code"] == 2);
  }

  TEST_CASE("config errors") {
    CHECK(cli({"solve", "--scenario", "nope"}).code == kExitConfig);
    CHECK(cli({"solve", "--scenario", "single_flux_burgers", "--n", "8"}).code == kExitConfig);
    CHECK(cli({"solve", "--scenario", "single_flux_burgers", "--t", "-1"}).code == kExitConfig);
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"compare", "--scenario", "single_flux_burgers", "--t", "1", "--fvm-t", "0.5"}).code == kExitConfig);
    CHECK(cli({"tv-report", "--scenario", "single_flux_burgers", "--n", "64,128"}).code == kExitConfig);
    CHECK(cli({"verify", "--filter", "nope"}).code == kExitConfig);
  }

  TEST_CASE("compare") {
    const auto dir = fresh_dir("compare");
    auto r = cli({"compare", "--scenario", "single_flux_burgers", "--t", "1", "--n", "800", "--out", dir.string()});
    CHECK(r.code == kExitOk);
    const auto j = nlohmann::json::parse(slurp(dir / "compare.json"));
    CHECK(j["pass"] == true);
    CHECK(j["runs"][0]["l1"].get<double>() <= j["runs"][0]["l1_bound"].get<double>());

    // 10 dx is generous at N = 16; a tighter factor exercises the tolerance exit.
    r = cli({"compare", "--scenario", "single_flux_burgers", "--t", "1", "--n", "16", "--l1-factor", "0.01", "--out",
             dir.string()});
    CHECK(r.code == kExitTolerance);
  }

  TEST_CASE("tv report") {
    const auto dir = fresh_dir("tv");
    const auto r = cli({"tv-report", "--scenario", "single_flux_burgers", "--t", "1", "--n", "64,128,256", "--out",
                        dir.string()});
    CHECK(r.code == kExitOk);
    for (const char* ext : {".json", ".csv", ".svg"}) CHECK(fs::exists(dir / (std::string("tv_t1") + ext)));
  }

  TEST_CASE("verify") {
    const auto dir = fresh_dir("verify");
    auto r = cli({"verify", "--filter", "legendre", "--out", dir.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("criterion 1") != std::string::npos);
    CHECK(r.out.find("criterion 2") == std::string::npos);

    r = cli({"verify", "--filter", "oracle", "--tighten", "10", "--out", dir.string()});
    CHECK(r.code == kExitAcceptance);
  }

  TEST_CASE("list scenarios") {
    const auto r = cli({"list-scenarios"});
    CHECK(r.code == kExitOk);
    for (const auto& n : builtin_names()) CHECK(r.out.find(n) != std::string::npos);
  }

  TEST_CASE("solve is deterministic") {
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    for (const auto& d : {a, b}) {
      REQUIRE(cli({"solve", "--scenario", "thm31_quartic", "--t", "0.5,1", "--n", "128", "--out", d.string()}).code ==
              kExitOk);
    }
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }

  TEST_CASE("scenario files") {
    const auto dir = fresh_dir("file");
    fs::create_directories(dir);
    {
      std::ofstream os(dir / "s.json");
      os << scenario_to_json(builtin("twoflux_noncritical")).dump();
    }
    const auto r = cli({"solve", "--scenario", (dir / "s.json").string(), "--n", "64", "--out", dir.string()});
    CHECK(r.code == kExitOk);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK(cli({"solve", "--scenario", (dir / "bad.json").string(), "--out", dir.string()}).code == kExitConfig);
  }
}
