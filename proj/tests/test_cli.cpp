#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ION_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string config(const std::string& name) {
  return std::string(ION_CONFIG_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("ionphase_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("cli: plan writes tables and exits zero") {
  const auto dir = fresh_dir("plan");
  CHECK(run_cli("plan --config " + config("stock_gate_plan.ini") + " --out " + dir.string() +
                " --format both") == 0);
  CHECK(fs::exists(dir / "gate_plans.csv"));
  CHECK(fs::exists(dir / "gate_plans.json"));
  CHECK(fs::exists(dir / "coprop_plans.csv"));
  const auto csv = slurp(dir / "gate_plans.csv");
  CHECK(csv.find("160,154,1") != std::string::npos);
}

TEST_CASE("cli: infeasible plan exits 2 with diagnostics") {
  const auto dir = fresh_dir("plan_bad");
  write(dir / "bad.ini",
        "schema_version = 1\n[plan]\nqubit_mhz = 12642.82\nrep_rate_mhz = 80.57\n"
        "aom_a_candidates_mhz = 500\naom_b_center_mhz = 165\naom_b_bandwidth_mhz = 30\n"
        "aom_a_center_mhz = 120\naom_a_bandwidth_mhz = 120\n");
  CHECK(run_cli("plan --config " + (dir / "bad.ini").string() + " --out " + dir.string()) == 2);
}

TEST_CASE("cli: malformed or missing configs exit 1") {
  const auto dir = fresh_dir("cfg_bad");
  CHECK(run_cli("plan --config " + (dir / "nope.ini").string()) == 1);
  write(dir / "broken.ini", "schema_version = 1\nthis line has no equals sign\n");
  CHECK(run_cli("plan --config " + (dir / "broken.ini").string()) == 1);
  write(dir / "old.ini", "schema_version = 99\n[plan]\nqubit_mhz = 1\nrep_rate_mhz = 1\n");
  CHECK(run_cli("plan --config " + (dir / "old.ini").string()) == 1);
  // Unknown scenario id.
  write(dir / "scen.ini",
        "schema_version = 1\n[scenario]\nid = nonsense\nsweep_name = x\n"
        "sweep_start = 0\nsweep_stop = 1\nsweep_points = 2\n");
  CHECK(run_cli("run --config " + (dir / "scen.ini").string() + " --out " + dir.string()) == 1);
  // Usage error: no subcommand.
  CHECK(run_cli("") == 1);
}

TEST_CASE("cli: chain-verify passes on both shipped presets") {
  CHECK(run_cli("chain-verify --config " + config("chain_three_pll.ini")) == 0);
  CHECK(run_cli("chain-verify --config " + config("chain_single_pll.ini")) == 0);
}

TEST_CASE("cli: chain-verify exits 2 when no plan fits the preset") {
  const auto dir = fresh_dir("verify_bad");
  write(dir / "chain.ini",
        "schema_version = 1\n[chain]\npreset = single_pll\nplan_source = solve\n"
        "[plan]\nqubit_mhz = 12642.82\nrep_rate_mhz = 80.57\n"
        "aom_a_candidates_mhz = 77.5\naom_a_signs = +1\n"
        "aom_b_center_mhz = 165\naom_b_bandwidth_mhz = 30\n"
        "aom_a_center_mhz = 120\naom_a_bandwidth_mhz = 120\n");
  // Only two-tooth plans exist for these inputs; single_pll cannot host them.
  CHECK(run_cli("chain-verify --config " + (dir / "chain.ini").string()) == 2);
}

TEST_CASE("cli: same invocation and seed give byte-identical outputs") {
  const auto dir1 = fresh_dir("runA");
  const auto dir2 = fresh_dir("runB");
  const std::string base = "run --config " + config("parity_scan.ini") + " --format both --out ";
  CHECK(run_cli(base + dir1.string()) == 0);
  CHECK(run_cli(base + dir2.string()) == 0);
  CHECK(slurp(dir1 / "parity_scan_42.csv") == slurp(dir2 / "parity_scan_42.csv"));
  CHECK(slurp(dir1 / "parity_scan_42.json") == slurp(dir2 / "parity_scan_42.json"));
  // Serial execution reproduces the same bytes.
  const auto dir3 = fresh_dir("runC");
  CHECK(run_cli(base + dir3.string() + " --serial") == 0);
  CHECK(slurp(dir1 / "parity_scan_42.csv") == slurp(dir3 / "parity_scan_42.csv"));
}

TEST_CASE("cli: the seed override renames and changes the output") {
  const auto dir = fresh_dir("seed");
  CHECK(run_cli("run --config " + config("parity_scan.ini") + " --seed 7 --out " + dir.string()) ==
        0);
  CHECK(fs::exists(dir / "parity_scan_7.csv"));
  const auto dir2 = fresh_dir("seed2");
  CHECK(run_cli("run --config " + config("parity_scan.ini") + " --out " + dir2.string()) == 0);
  CHECK(slurp(dir / "parity_scan_7.csv") != slurp(dir2 / "parity_scan_42.csv"));
}

TEST_CASE("cli: list-scenarios names every runnable scenario") {
  CHECK(run_cli("list-scenarios") == 0);
}
