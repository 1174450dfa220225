#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/cli/app.hpp"
#include "spinvault/cli/csv.hpp"
#include "spinvault/cli/sweep.hpp"

using namespace spinvault;
using namespace spinvault::cli;
namespace fs = std::filesystem;

namespace {

const std::string kScenario = std::string(SPINVAULT_SOURCE_DIR) + "/scenarios/canonical.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "spinvault");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) {
  return slurp(fs::path(SPINVAULT_GOLDEN_DIR) / name);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("spinvault_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("afc record carries the analytic memory efficiency") {
  const auto r = invoke({"afc", "--scenario", kScenario});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  const double eta = j.at("eta_m").get<double>();
  CHECK(eta == doctest::Approx(0.8662).epsilon(1e-4));
  const auto& b = j.at("breakdown");
  CHECK(eta == doctest::Approx(b.at("dephasing").get<double>() *
                               b.at("transfer_in").get<double>() *
                               b.at("transfer_out").get<double>() *
                               b.at("exchange_roundtrip").get<double>()));
  CHECK(j.at("multimode_capacity").get<int>() == 112);
  CHECK(r.out == golden("afc.json"));
}

TEST_CASE("repeater curve has one row per distance and link option") {
  const auto r = invoke({"repeater", "--scenario", kScenario, "--distance-range",
                         "200:3000:57", "--links", "4,8"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 115);
  CHECK(ls.front() == "distance_km,rate_hz,protocol,links");
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(split(ls[i]).size() == 4);
  CHECK(r.out == golden("repeater.csv"));
}

TEST_CASE("direct-transmission rows are opt-in") {
  const auto r = invoke({"repeater", "--scenario", kScenario, "--distance-range",
                         "200:3000:57", "--links", "4,8", "--direct-source-rate", "1e10"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out).size() == 1 + 3 * 57);
  CHECK(r.out.find(",direct,0") != std::string::npos);
  CHECK(r.out == golden("fig4_rates.csv"));
}

TEST_CASE("repeater verbs") {
  auto r = invoke({"repeater", "crossover", "--scenario", kScenario});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("crossover_km").get<double>() ==
        doctest::Approx(507.0).epsilon(0.01));
  r = invoke({"repeater", "optimal-links", "--scenario", kScenario, "--distance", "2000"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("links").get<int>() == 8);
  r = invoke({"repeater", "max-distance", "--scenario", kScenario, "--storage-time", "360000"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("max_distance_km").get<double>() > 1000.0);
}

TEST_CASE("sweep over finesse gives monotone dephasing factors") {
  const auto r = invoke({"sweep", "--scenario", kScenario, "--grid",
                         "comb.finesse=2,4,8,16", "--quantity", "dephasing_factor"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "comb.finesse,dephasing_factor");
  double prev = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    const double F = std::stod(c[0]), v = std::stod(c[1]);
    CHECK(v == doctest::Approx(afc::dephasing_factor(F)).epsilon(1e-8));
    CHECK(v > prev);
    prev = v;
  }
  CHECK(r.out == golden("sweep_finesse.csv"));
}

TEST_CASE("two-axis sweep is lexicographic over grid indices") {
  const auto r = invoke({"sweep", "--scenario", kScenario, "--grid", "comb.finesse=4,8",
                         "--grid", "ensemble.gamma_s=10,20,30", "--quantity",
                         "dephasing_factor"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 7);
  CHECK(split(ls[1])[0] == split(ls[3])[0]);
  CHECK(split(ls[1])[1] != split(ls[2])[1]);
  CHECK(split(ls[3])[0] != split(ls[4])[0]);
}

TEST_CASE("spin-exchange sweep stays below the analytic curve") {
  const auto r = invoke({"pde", "--scenario", kScenario, "--sweep",
                         "J_over_gamma_s=10:250:13"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 14);
  CHECK(ls[0] == "sweep_value,eta_numeric,eta_analytic");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    CHECK(std::stod(c[1]) <= std::stod(c[2]));
  }
  CHECK(r.out == golden("fig3_exchange.csv"));
}

TEST_CASE("population time series") {
  const auto r = invoke({"pde", "--scenario", kScenario});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "t_s,alkali_population,noble_population");
  CHECK(ls.size() > 100);
  CHECK(r.out == golden("fig2_populations.csv"));
  const auto j = invoke({"pde", "--scenario", kScenario, "--format", "json"});
  REQUIRE(j.code == kExitOk);
  const auto rec = nlohmann::json::parse(j.out);
  CHECK(rec.at("total").get<double>() < rec.at("analytic_total").get<double>());
}

TEST_CASE("pulse comparison") {
  const auto r = invoke({"pulse", "--scenario", kScenario, "--omega2T-over-gamma",
                         "1:8:4", "--samples", "16"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out).size() == 13);
  CHECK(r.out == golden("pulse_small.csv"));
}

TEST_CASE("exit codes") {
  CHECK(invoke({"afc", "--scenario", "/nonexistent/scenario.json"}).code == kExitInput);
  CHECK(invoke({"afc", "--scenario", kScenario, "--set", "comb.finesse=-1"}).code ==
        kExitInput);
  CHECK(invoke({"afc", "--scenario", kScenario, "--set", "no.such=1"}).code == kExitInput);
  CHECK(invoke({"bogus"}).code == kExitInput);
  CHECK(invoke({"sweep", "--scenario", kScenario, "--grid", "no.such=1,2"}).code ==
        kExitInput);
  CHECK(invoke({"sweep", "--scenario", kScenario, "--grid", "comb.finesse="}).code ==
        kExitInput);
  const auto r = invoke({"repeater", "max-distance", "--scenario", kScenario,
                         "--storage-time", "1e-3"});
  CHECK(r.code == kExitCompute);
  CHECK(r.err.find("NeverReachable") != std::string::npos);
  CHECK(exit_code_for(Errc::ConfigNotFound) == kExitInput);
  CHECK(exit_code_for(Errc::IntegratorFailure) == kExitCompute);
}

TEST_CASE("overrides change the result") {
  const auto base = nlohmann::json::parse(invoke({"afc", "--scenario", kScenario}).out);
  const auto r = invoke({"afc", "--scenario", kScenario, "--set", "comb.finesse=16"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("dephasing_factor").get<double>() == doctest::Approx(afc::dephasing_factor(16)));
  CHECK(j.at("eta_m").get<double>() > base.at("eta_m").get<double>());
}

TEST_CASE("file output writes a manifest next to the artifact") {
  const auto dir = scratch_dir("manifest");
  const auto csv = dir / "rates.csv";
  const auto r = invoke({"repeater", "--scenario", kScenario, "--set",
                         "repeater.memory_count=10", "--out", csv.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  const auto manifest_path = fs::path(csv.string() + ".manifest.json");
  REQUIRE(fs::exists(manifest_path));
  const auto m = nlohmann::json::parse(slurp(manifest_path));
  CHECK(m.at("subcommand") == "repeater");
  CHECK(m.at("deterministic") == true);
  CHECK(m.at("overrides").at(0) == "repeater.memory_count=10");
  CHECK(m.at("resolved_scenario").at("repeater").at("memory_count") == 10);
  CHECK(m.contains("schema_version"));
  CHECK(m.contains("version"));

  // Rerunning the same manifest reproduces both files byte for byte.
  const auto first_csv = slurp(csv), first_manifest = slurp(manifest_path);
  REQUIRE(invoke({"repeater", "--scenario", kScenario, "--set",
                  "repeater.memory_count=10", "--out", csv.string()})
              .code == kExitOk);
  CHECK(slurp(csv) == first_csv);
  CHECK(slurp(manifest_path) == first_manifest);
  fs::remove_all(dir);
}

TEST_CASE("json output format") {
  const auto r = invoke({"sweep", "--scenario", kScenario, "--grid",
                         "comb.finesse=2,4", "--quantity", "dephasing_factor",
                         "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.dump().find("dephasing_factor") != std::string::npos);
}

TEST_CASE("worker count does not change output bytes") {
  const std::vector<std::string> sweep{"pde", "--scenario", kScenario, "--sweep",
                                       "J_over_gamma_s=10:250:7"};
  const std::vector<std::string> grid{"sweep", "--scenario", kScenario, "--grid",
                                      "comb.finesse=2:16:15", "--quantity",
                                      "memory_efficiency_total"};
  ::setenv("SPINVAULT_THREADS", "1", 1);
  const auto a = invoke(sweep).out, b = invoke(grid).out;
  ::setenv("SPINVAULT_THREADS", "4", 1);
  CHECK(invoke(sweep).out == a);
  CHECK(invoke(grid).out == b);
  ::unsetenv("SPINVAULT_THREADS");
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0.00000000e+00");
  CHECK(format_number(-0.0) == "0.00000000e+00");
  CHECK(format_number(1.0 / 3.0) == "3.33333333e-01");
  CHECK(format_number(-2.5e-300) == "-2.50000000e-300");
}

TEST_CASE("value grammar") {
  CHECK(parse_values("1:3:3") == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(parse_values("5") == std::vector<double>{5.0});
  CHECK(parse_values("2,4.5") == std::vector<double>{2.0, 4.5});
  CHECK_THROWS_AS(parse_values(""), Error);
  CHECK_THROWS_AS(parse_values("1:2:0"), Error);
  CHECK_THROWS_AS(parse_values("1:x:3"), Error);
  CHECK(parse_int_list("4,8") == std::vector<int>{4, 8});
  const auto axis = parse_grid_axis("comb.finesse=2,4");
  CHECK(axis.field == "comb.finesse");
  CHECK(axis.values.size() == 2);
  CHECK_THROWS_AS(parse_grid_axis("comb.finesse"), Error);
}
