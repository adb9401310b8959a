#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "ionphase/planner.hpp"
#include "ionphase/runner.hpp"

namespace ionphase::io {

/// Round-trip-exact decimal rendering of a double.
std::string format_double(double v);

std::string hex_hash(std::uint64_t h);

/// Plan tables.  Columns, in order:
///   n, m, s_a, aom_a_hz, drive_red_hz, drive_blue_hz, residual_red_hz, residual_blue_hz
/// and for the copropagating table: p, drive1_hz, drive2_hz, residual_hz.
std::string gate_plans_csv(const planner::GatePlanSet& set, std::uint64_t config_hash);
std::string coprop_plans_csv(const planner::CoPropPlanSet& set, std::uint64_t config_hash);
nlohmann::ordered_json gate_plans_json(const planner::GatePlanSet& set, std::uint64_t config_hash);
nlohmann::ordered_json coprop_plans_json(const planner::CoPropPlanSet& set,
                                         std::uint64_t config_hash);

/// Scenario results: header comment with config hash and seed, one header
/// row, then one row per sweep point.
std::string run_result_csv(const experiments::RunResult& result, std::uint64_t config_hash);
nlohmann::ordered_json run_result_json(const experiments::RunResult& result,
                                       std::uint64_t config_hash);

void write_file(const std::string& path, const std::string& contents);

}  // namespace ionphase::io
