#include "doctest.h"

#include <string>

#include "ionphase/chain_presets.hpp"
#include "ionphase/config.hpp"
#include "ionphase/errors.hpp"
#include "ionphase/io.hpp"
#include "ionphase/planner.hpp"
#include "ionphase/rng.hpp"
#include "ionphase/runner.hpp"
#include "ionphase/scenario.hpp"

using namespace ionphase;

TEST_CASE("config parsing: sections, nesting, lists, comments") {
  const char* text =
      "schema_version = 1\n"
      "# a comment\n"
      "[chain]\n"
      "preset = three_pll\n"
      "; another comment\n"
      "[chain.drift]\n"
      "times_s = 0, 10, 20\n"
      "values_hz = 1.5, -2, 0\n"
      "[scenario]\n"
      "shots = 250\n"
      "exact = off\n";
  const auto c = cfg::ConfigFile::parse_string(text);
  CHECK(c.require_int("schema_version") == 1);
  CHECK(c.require_string("chain.preset") == "three_pll");
  CHECK(c.require_double_list("chain.drift.times_s") == std::vector<double>{0.0, 10.0, 20.0});
  CHECK(c.get_int("scenario.shots", 0) == 250);
  CHECK(c.get_bool("scenario.exact", true) == false);
  CHECK(c.get_double("missing.key", 7.5) == 7.5);
  CHECK(c.keys_with_prefix("chain.drift.").size() == 2);
}

TEST_CASE("config parsing: malformed input is reported with its line") {
  try {
    cfg::ConfigFile::parse_string("schema_version = 1\nnot a pair\n", "bad.ini");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.ini:2") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg::ConfigFile::parse_string("[unterminated\n"), ConfigError);
  CHECK_THROWS_AS(cfg::ConfigFile::parse_string("a = 1\na = 2\n"), ConfigError);
  const auto c = cfg::ConfigFile::parse_string("x = 1.5.3\n");
  CHECK_THROWS_AS(c.require_double("x"), ConfigError);
  CHECK_THROWS_AS(c.require_string("y"), ConfigError);
}

TEST_CASE("schema version guards scenario loading") {
  const auto c = cfg::ConfigFile::parse_string(
      "schema_version = 2\n[scenario]\nid = alignment\nsweep_name = shuttle_um\n"
      "sweep_start = 0\nsweep_stop = 1\nsweep_points = 2\n");
  CHECK_THROWS_AS(experiments::scenario_from_config(c), ConfigError);
}

TEST_CASE("unknown scenario ids list the known ones") {
  const auto c = cfg::ConfigFile::parse_string(
      "schema_version = 1\n[scenario]\nid = frobnicate\nsweep_name = x\n"
      "sweep_start = 0\nsweep_stop = 1\nsweep_points = 2\n");
  try {
    experiments::scenario_from_config(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("frobnicate") != std::string::npos);
    CHECK(what.find("parity_scan") != std::string::npos);
    CHECK(what.find("stability") != std::string::npos);
  }
}

TEST_CASE("content hash is stable and sensitive") {
  const auto a = cfg::ConfigFile::parse_string("x = 1\n");
  const auto b = cfg::ConfigFile::parse_string("x = 1\n");
  const auto d = cfg::ConfigFile::parse_string("x = 2\n");
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.content_hash() != d.content_hash());
  CHECK(io::hex_hash(a.content_hash()).size() == 16);
}

TEST_CASE("plan tables keep the fixed column order") {
  planner::PlannerInput in;
  const auto set = planner::plan_gate(in);
  REQUIRE(!set.plans.empty());
  const auto csv = io::gate_plans_csv(set, 0xabcdef);
  CHECK(csv.find("n,m,s_a,aom_a_hz,drive_red_hz,drive_blue_hz,residual_red_hz,residual_blue_hz") !=
        std::string::npos);
  CHECK(csv.find("config_hash=0000000000abcdef") != std::string::npos);
  const auto j = io::gate_plans_json(set, 0xabcdef);
  CHECK(j["columns"][0] == "n");
  CHECK(j["columns"][3] == "aom_a_hz");
  CHECK(j["plans"].size() == set.plans.size());

  const auto co = planner::plan_copropagating(in);
  const auto co_csv = io::coprop_plans_csv(co, 1);
  CHECK(co_csv.find("p,drive1_hz,drive2_hz,residual_hz") != std::string::npos);
}

TEST_CASE("run results serialize with hash, seed and aux columns") {
  experiments::RunResult r;
  r.scenario = "parity_scan";
  r.seed = 99;
  r.sweep_name = "analysis_phase_rad";
  r.observable_name = "parity";
  r.aux_names = {"path_drift_m"};
  r.points = {{0.25, 0.5, 0.01, {1e-9}}, {0.5, -0.5, 0.02, {2e-9}}};
  const auto csv = io::run_result_csv(r, 7);
  CHECK(csv.find("seed=99") != std::string::npos);
  CHECK(csv.find("config_hash=0000000000000007") != std::string::npos);
  CHECK(csv.find("analysis_phase_rad,parity,std_error,path_drift_m") != std::string::npos);
  CHECK(csv.find("0.25,0.5,0.01,1.0000000000000001e-09") != std::string::npos);
  const auto j = io::run_result_json(r, 7);
  CHECK(j["points"].size() == 2);
  CHECK(j["points"][0]["mean"] == 0.5);
}

TEST_CASE("rng substreams are reproducible and independent") {
  auto a = experiments::Rng::substream(1, 2, 3);
  auto b = experiments::Rng::substream(1, 2, 3);
  auto c = experiments::Rng::substream(1, 2, 4);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
  // Uniform samples live in [0, 1).
  auto r = experiments::Rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal sampler has the right first moments") {
  auto r = experiments::Rng(10);
  double m = 0.0, ss = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    m += v;
    ss += v * v;
  }
  m /= n;
  ss = ss / n - m * m;
  CHECK(std::abs(m) < 0.01);
  CHECK(std::abs(ss - 1.0) < 0.02);
}
