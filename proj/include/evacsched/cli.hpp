#pragma once

#include <string>
#include <vector>

#include "evacsched/model.hpp"
#include "evacsched/solvers.hpp"

namespace evacsched {

/// Departure-profile rows "areaId,minute,vehiclesDeparting" (header included):
/// one row per departure minute per area, rate vehicles each, the last batch
/// min(rate, remaining). Areas with flow 0 produce no rows.
std::string report_departure_profile(const Solution& solution, const Instance& instance);

/// Entry point behind the binary: parses argv (without the program name) and
/// runs one subcommand. Returns 0 on success, 1 on infeasibility or
/// validation violations, 2 on usage or schema errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace evacsched
