#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "spa/config.hpp"

namespace spa::cli {

struct CommandOptions {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool csv = false;
};

// Pressure sweep of the kinematic models; emits eval.csv
// (pressure_MPa, torque_Nm, angle_deg, objective).
int cmd_eval(const RunConfig& config, const CommandOptions& opts, std::ostream& out);

// Continuous solve plus grid oracle; flags disagreement beyond one grid cell.
int cmd_optimize(const RunConfig& config, const CommandOptions& opts, std::ostream& out);

// Natural-frequency estimate; when trace_csv is non-empty, identifies the
// measured frequency from a step trace and reports the relative error.
int cmd_freq(const RunConfig& config, const CommandOptions& opts,
             const std::string& trace_csv, std::ostream& out);

// LQR synthesis and sampled closed-loop simulation, including the damping
// band sweep; emits control_trace*.csv.
int cmd_control(const RunConfig& config, const CommandOptions& opts, std::ostream& out);

// Side-by-side replicas of the bundled reference tables with deltas.
int cmd_report(const RunConfig& config, const CommandOptions& opts, std::ostream& out);

// Fits the stress-strain exponent from a two-column CSV (strain, stress_Pa).
int cmd_fit_n(const std::string& data_csv, std::ostream& out);

}  // namespace spa::cli
