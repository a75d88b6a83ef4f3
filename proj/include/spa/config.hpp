#pragma once

#include <optional>
#include <string>

#include "spa/control.hpp"
#include "spa/geometry.hpp"
#include "spa/optimizer.hpp"

namespace spa {

// Parsed form of the dotted-key configuration file. Units are embedded in the
// key names (mm, MPa, deg at this boundary); conversion to SI happens in the
// make_* builders.
struct RunConfig {
    struct Geometry {
        double a_mm = 4.0;
        double b_mm = 20.0;
        double w_mm = 30.0;
        double t_mm = 1.5;
    } geometry;

    struct MaterialCfg {
        double E_MPa = 0.34;
        double n = 1.0;
        double density_kg_m3 = 1070.0;
        double zeta = 0.7;
        double zeta_perturb = 0.1;
    } material;

    struct Actuator {
        double length_mm = 94.0;
        std::optional<double> mass_override_kg;
    } actuator;

    struct Optimize {
        double pressure_MPa = 0.15;
        double torque_norm_Nm = 0.4;
        double angle_norm_rad = 1.4 * 3.14159265358979323846;
        double a_min_mm = 2.0, a_max_mm = 5.0;
        double b_min_mm = 14.0, b_max_mm = 24.0;
        double h_min_mm = 15.0, h_max_mm = 25.0;
        double w_min_mm = 10.0, w_max_mm = 30.0;
        double t_min_mm = 1.5, t_max_mm = 3.0;
        std::optional<double> omega_min_rad_s;
        std::optional<double> omega_max_rad_s;
        std::optional<double> mass_min_kg;
        std::optional<double> mass_max_kg;
        double grid_step_mm = 0.25;
    } optimize;

    struct Freq {
        std::optional<double> n;  // overrides material.n for frequency studies
    } freq;

    struct Control {
        double p = 100.0;
        double R = 1.0;
        double dt_ms = 25.0;
        double saturation_revps = 5.0;
        double reference_deg = 90.0;
        bool normalized_weights = true;
        std::optional<double> omega_n_rad_s;  // overrides the design estimate
        std::optional<double> zeta;           // overrides material.zeta
        double pump_lead_m = 0.008;
        double pump_syringe_area_m2 = 5.3e-4;
        double pump_capacity_m3_per_Pa = 1.0e-9;
        double pump_motor_const = 1.32167e-3;
    } control;

    struct Sim {
        double dt_ms = 1.0;
        double duration_s = 6.0;
    } sim;

    struct Eval {
        double pressure_max_MPa = 0.25;
        int pressure_steps = 26;
    } eval;

    struct Report {
        bool table1 = true;
        bool table2 = true;
        bool table3 = true;
    } report;
};

// Parses a config file; throws ConfigError with line information on parse
// problems and with the dotted key path on validation problems.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Emits the full key set; parse(serialize(c)) round-trips.
std::string serialize(const RunConfig& config);

// Domain builders (validated; errors carry key paths).
ActuatorDesign make_design(const RunConfig& config);
DesignSpace make_space(const RunConfig& config);
PumpModel make_pump(const RunConfig& config);

}  // namespace spa
