#include "ionphase/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ionphase/errors.hpp"

namespace ionphase::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex_hash(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string header_comment(std::uint64_t config_hash, std::uint64_t seed, bool with_seed) {
  std::ostringstream out;
  out << "# ionphase schema=1 config_hash=" << hex_hash(config_hash);
  if (with_seed) out << " seed=" << seed;
  out << "\n";
  return out.str();
}

}  // namespace

std::string gate_plans_csv(const planner::GatePlanSet& set, std::uint64_t config_hash) {
  std::ostringstream out;
  out << header_comment(config_hash, 0, false);
  out << "n,m,s_a,aom_a_hz,drive_red_hz,drive_blue_hz,residual_red_hz,residual_blue_hz\n";
  for (const auto& p : set.plans) {
    out << p.red_tooth << ',' << p.blue_tooth << ',' << p.aom_a_sign << ','
        << format_double(p.aom_a_hz) << ',' << format_double(p.red_drive_hz) << ','
        << format_double(p.blue_drive_hz) << ',' << format_double(p.residual_red_hz) << ','
        << format_double(p.residual_blue_hz) << '\n';
  }
  return out.str();
}

std::string coprop_plans_csv(const planner::CoPropPlanSet& set, std::uint64_t config_hash) {
  std::ostringstream out;
  out << header_comment(config_hash, 0, false);
  out << "p,drive1_hz,drive2_hz,residual_hz\n";
  for (const auto& p : set.plans) {
    out << p.tooth << ',' << format_double(p.drive1_hz) << ',' << format_double(p.drive2_hz)
        << ',' << format_double(p.residual_hz) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json gate_plans_json(const planner::GatePlanSet& set, std::uint64_t config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = hex_hash(config_hash);
  j["columns"] = {"n", "m", "s_a", "aom_a_hz", "drive_red_hz", "drive_blue_hz",
                  "residual_red_hz", "residual_blue_hz"};
  j["plans"] = nlohmann::ordered_json::array();
  for (const auto& p : set.plans) {
    j["plans"].push_back({p.red_tooth, p.blue_tooth, p.aom_a_sign, p.aom_a_hz, p.red_drive_hz,
                          p.blue_drive_hz, p.residual_red_hz, p.residual_blue_hz});
  }
  if (!set.diagnostics.empty()) j["diagnostics"] = set.diagnostics;
  return j;
}

nlohmann::ordered_json coprop_plans_json(const planner::CoPropPlanSet& set,
                                         std::uint64_t config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = hex_hash(config_hash);
  j["columns"] = {"p", "drive1_hz", "drive2_hz", "residual_hz"};
  j["plans"] = nlohmann::ordered_json::array();
  for (const auto& p : set.plans) {
    j["plans"].push_back({p.tooth, p.drive1_hz, p.drive2_hz, p.residual_hz});
  }
  if (!set.diagnostics.empty()) j["diagnostics"] = set.diagnostics;
  return j;
}

std::string run_result_csv(const experiments::RunResult& r, std::uint64_t config_hash) {
  std::ostringstream out;
  out << "# ionphase schema=1 scenario=" << r.scenario << " config_hash=" << hex_hash(config_hash)
      << " seed=" << r.seed << "\n";
  out << r.sweep_name << ',' << r.observable_name << ",std_error";
  for (const auto& a : r.aux_names) out << ',' << a;
  out << '\n';
  for (const auto& p : r.points) {
    out << format_double(p.x) << ',' << format_double(p.mean) << ',' << format_double(p.std_error);
    for (double a : p.aux) out << ',' << format_double(a);
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json run_result_json(const experiments::RunResult& r,
                                       std::uint64_t config_hash) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["config_hash"] = hex_hash(config_hash);
  j["sweep"] = r.sweep_name;
  j["observable"] = r.observable_name;
  j["aux_columns"] = r.aux_names;
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : r.points) {
    nlohmann::ordered_json row;
    row["x"] = p.x;
    row["mean"] = p.mean;
    row["std_error"] = p.std_error;
    if (!p.aux.empty()) row["aux"] = p.aux;
    j["points"].push_back(row);
  }
  return j;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file '" + path + "'");
  out << contents;
}

}  // namespace ionphase::io
