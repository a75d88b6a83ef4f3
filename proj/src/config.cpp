#include "spa/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "spa/errors.hpp"

namespace spa {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "': cannot parse number from '" + value + "'");
    }
}

bool parse_bool(const std::string& value, const std::string& key, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': expected true/false, got '" + value + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

std::map<std::string, Setter> build_registry() {
    std::map<std::string, Setter> reg;
    auto num = [&reg](const std::string& key, double RunConfig::Geometry::* field) {
        reg[key] = [key, field](RunConfig& c, const std::string& v, int line) {
            c.geometry.*field = parse_number(v, key, line);
        };
    };
    num("geometry.a_mm", &RunConfig::Geometry::a_mm);
    num("geometry.b_mm", &RunConfig::Geometry::b_mm);
    num("geometry.w_mm", &RunConfig::Geometry::w_mm);
    num("geometry.t_mm", &RunConfig::Geometry::t_mm);

    auto mat = [&reg](const std::string& key, double RunConfig::MaterialCfg::* field) {
        reg[key] = [key, field](RunConfig& c, const std::string& v, int line) {
            c.material.*field = parse_number(v, key, line);
        };
    };
    mat("material.E_MPa", &RunConfig::MaterialCfg::E_MPa);
    mat("material.n", &RunConfig::MaterialCfg::n);
    mat("material.density_kg_m3", &RunConfig::MaterialCfg::density_kg_m3);
    mat("material.zeta", &RunConfig::MaterialCfg::zeta);
    mat("material.zeta_perturb", &RunConfig::MaterialCfg::zeta_perturb);

    reg["actuator.length_mm"] = [](RunConfig& c, const std::string& v, int line) {
        c.actuator.length_mm = parse_number(v, "actuator.length_mm", line);
    };
    reg["actuator.mass_override_kg"] = [](RunConfig& c, const std::string& v, int line) {
        c.actuator.mass_override_kg = parse_number(v, "actuator.mass_override_kg", line);
    };

    auto opt = [&reg](const std::string& key, double RunConfig::Optimize::* field) {
        reg[key] = [key, field](RunConfig& c, const std::string& v, int line) {
            c.optimize.*field = parse_number(v, key, line);
        };
    };
    opt("optimize.pressure_MPa", &RunConfig::Optimize::pressure_MPa);
    opt("optimize.torque_norm_Nm", &RunConfig::Optimize::torque_norm_Nm);
    opt("optimize.angle_norm_rad", &RunConfig::Optimize::angle_norm_rad);
    opt("optimize.a_min_mm", &RunConfig::Optimize::a_min_mm);
    opt("optimize.a_max_mm", &RunConfig::Optimize::a_max_mm);
    opt("optimize.b_min_mm", &RunConfig::Optimize::b_min_mm);
    opt("optimize.b_max_mm", &RunConfig::Optimize::b_max_mm);
    opt("optimize.h_min_mm", &RunConfig::Optimize::h_min_mm);
    opt("optimize.h_max_mm", &RunConfig::Optimize::h_max_mm);
    opt("optimize.w_min_mm", &RunConfig::Optimize::w_min_mm);
    opt("optimize.w_max_mm", &RunConfig::Optimize::w_max_mm);
    opt("optimize.t_min_mm", &RunConfig::Optimize::t_min_mm);
    opt("optimize.t_max_mm", &RunConfig::Optimize::t_max_mm);
    opt("optimize.grid_step_mm", &RunConfig::Optimize::grid_step_mm);
    auto opt_opt = [&reg](const std::string& key,
                          std::optional<double> RunConfig::Optimize::* field) {
        reg[key] = [key, field](RunConfig& c, const std::string& v, int line) {
            c.optimize.*field = parse_number(v, key, line);
        };
    };
    opt_opt("optimize.omega_min_rad_s", &RunConfig::Optimize::omega_min_rad_s);
    opt_opt("optimize.omega_max_rad_s", &RunConfig::Optimize::omega_max_rad_s);
    opt_opt("optimize.mass_min_kg", &RunConfig::Optimize::mass_min_kg);
    opt_opt("optimize.mass_max_kg", &RunConfig::Optimize::mass_max_kg);

    reg["freq.n"] = [](RunConfig& c, const std::string& v, int line) {
        c.freq.n = parse_number(v, "freq.n", line);
    };

    auto ctl = [&reg](const std::string& key, double RunConfig::Control::* field) {
        reg[key] = [key, field](RunConfig& c, const std::string& v, int line) {
            c.control.*field = parse_number(v, key, line);
        };
    };
    ctl("control.p", &RunConfig::Control::p);
    ctl("control.R", &RunConfig::Control::R);
    ctl("control.dt_ms", &RunConfig::Control::dt_ms);
    ctl("control.saturation_revps", &RunConfig::Control::saturation_revps);
    ctl("control.reference_deg", &RunConfig::Control::reference_deg);
    ctl("control.pump_lead_m", &RunConfig::Control::pump_lead_m);
    ctl("control.pump_syringe_area_m2", &RunConfig::Control::pump_syringe_area_m2);
    ctl("control.pump_capacity_m3_per_Pa", &RunConfig::Control::pump_capacity_m3_per_Pa);
    ctl("control.pump_motor_const", &RunConfig::Control::pump_motor_const);
    reg["control.normalized_weights"] = [](RunConfig& c, const std::string& v, int line) {
        c.control.normalized_weights = parse_bool(v, "control.normalized_weights", line);
    };
    reg["control.omega_n_rad_s"] = [](RunConfig& c, const std::string& v, int line) {
        c.control.omega_n_rad_s = parse_number(v, "control.omega_n_rad_s", line);
    };
    reg["control.zeta"] = [](RunConfig& c, const std::string& v, int line) {
        c.control.zeta = parse_number(v, "control.zeta", line);
    };

    reg["sim.dt_ms"] = [](RunConfig& c, const std::string& v, int line) {
        c.sim.dt_ms = parse_number(v, "sim.dt_ms", line);
    };
    reg["sim.duration_s"] = [](RunConfig& c, const std::string& v, int line) {
        c.sim.duration_s = parse_number(v, "sim.duration_s", line);
    };
    reg["eval.pressure_max_MPa"] = [](RunConfig& c, const std::string& v, int line) {
        c.eval.pressure_max_MPa = parse_number(v, "eval.pressure_max_MPa", line);
    };
    reg["eval.pressure_steps"] = [](RunConfig& c, const std::string& v, int line) {
        c.eval.pressure_steps = static_cast<int>(parse_number(v, "eval.pressure_steps", line));
    };
    reg["report.table1"] = [](RunConfig& c, const std::string& v, int line) {
        c.report.table1 = parse_bool(v, "report.table1", line);
    };
    reg["report.table2"] = [](RunConfig& c, const std::string& v, int line) {
        c.report.table2 = parse_bool(v, "report.table2", line);
    };
    reg["report.table3"] = [](RunConfig& c, const std::string& v, int line) {
        c.report.table3 = parse_bool(v, "report.table3", line);
    };
    return reg;
}

void validate(const RunConfig& c) {
    const auto& g = c.geometry;
    if (const char* violated = CrossSection::invariant_violation(
            g.a_mm * 1e-3, g.b_mm * 1e-3, g.w_mm * 1e-3, g.t_mm * 1e-3)) {
        const std::string field{violated[0]};  // leading symbol names the field
        throw ConfigError("geometry." + field + "_mm: violates '" + violated + "'");
    }
    try {
        Material(c.material.E_MPa * 1e6, c.material.n, c.material.density_kg_m3,
                 c.material.zeta, c.material.zeta_perturb);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("material: ") + e.what());
    }
    if (!(c.actuator.length_mm > 0.0))
        throw ConfigError("actuator.length_mm: must be positive");
    if (c.actuator.mass_override_kg && !(*c.actuator.mass_override_kg > 0.0))
        throw ConfigError("actuator.mass_override_kg: must be positive");
    auto window = [](double lo, double hi, const std::string& key) {
        if (!(lo <= hi)) throw ConfigError(key + ": min exceeds max");
    };
    window(c.optimize.a_min_mm, c.optimize.a_max_mm, "optimize.a_min_mm");
    window(c.optimize.b_min_mm, c.optimize.b_max_mm, "optimize.b_min_mm");
    window(c.optimize.h_min_mm, c.optimize.h_max_mm, "optimize.h_min_mm");
    window(c.optimize.w_min_mm, c.optimize.w_max_mm, "optimize.w_min_mm");
    window(c.optimize.t_min_mm, c.optimize.t_max_mm, "optimize.t_min_mm");
    if (c.optimize.omega_min_rad_s.has_value() != c.optimize.omega_max_rad_s.has_value())
        throw ConfigError("optimize.omega_min_rad_s: frequency band needs both ends");
    if (c.optimize.mass_min_kg.has_value() != c.optimize.mass_max_kg.has_value())
        throw ConfigError("optimize.mass_min_kg: mass bounds need both ends");
    if (!(c.optimize.pressure_MPa >= 0.0))
        throw ConfigError("optimize.pressure_MPa: must be non-negative");
    if (!(c.optimize.torque_norm_Nm > 0.0))
        throw ConfigError("optimize.torque_norm_Nm: must be positive");
    if (!(c.optimize.angle_norm_rad > 0.0))
        throw ConfigError("optimize.angle_norm_rad: must be positive");
    if (!(c.optimize.grid_step_mm > 0.0))
        throw ConfigError("optimize.grid_step_mm: must be positive");
    if (!(c.control.dt_ms > 0.0)) throw ConfigError("control.dt_ms: must be positive");
    if (!(c.control.saturation_revps > 0.0))
        throw ConfigError("control.saturation_revps: must be positive");
    if (!(c.control.R > 0.0)) throw ConfigError("control.R: must be positive");
    if (!(c.control.p >= 0.0)) throw ConfigError("control.p: must be non-negative");
    if (c.control.zeta && !(*c.control.zeta > 0.0 && *c.control.zeta < 1.0))
        throw ConfigError("control.zeta: must be in (0, 1)");
    if (c.control.omega_n_rad_s && !(*c.control.omega_n_rad_s > 0.0))
        throw ConfigError("control.omega_n_rad_s: must be positive");
    try {
        make_pump(c);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("control.pump: ") + e.what());
    }
    if (!(c.sim.dt_ms > 0.0)) throw ConfigError("sim.dt_ms: must be positive");
    if (!(c.sim.duration_s >= c.sim.dt_ms * 1e-3))
        throw ConfigError("sim.duration_s: must be at least one step");
    if (c.eval.pressure_steps < 1)
        throw ConfigError("eval.pressure_steps: must be >= 1");
    if (c.freq.n && !(*c.freq.n >= 1.0)) throw ConfigError("freq.n: must be >= 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    static const std::map<std::string, Setter> registry = build_registry();
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": line " + std::to_string(line) +
                              ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = registry.find(key);
        if (it == registry.end())
            throw ConfigError(origin + ": line " + std::to_string(line) +
                              ": unknown key '" + key + "'");
        it->second(config, value, line);
    }
    validate(config);
    return config;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config file not found: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out.precision(17);
    auto kv = [&out](const std::string& key, double v) { out << key << " = " << v << "\n"; };
    auto kb = [&out](const std::string& key, bool v) {
        out << key << " = " << (v ? "true" : "false") << "\n";
    };
    kv("geometry.a_mm", c.geometry.a_mm);
    kv("geometry.b_mm", c.geometry.b_mm);
    kv("geometry.w_mm", c.geometry.w_mm);
    kv("geometry.t_mm", c.geometry.t_mm);
    kv("material.E_MPa", c.material.E_MPa);
    kv("material.n", c.material.n);
    kv("material.density_kg_m3", c.material.density_kg_m3);
    kv("material.zeta", c.material.zeta);
    kv("material.zeta_perturb", c.material.zeta_perturb);
    kv("actuator.length_mm", c.actuator.length_mm);
    if (c.actuator.mass_override_kg) kv("actuator.mass_override_kg", *c.actuator.mass_override_kg);
    kv("optimize.pressure_MPa", c.optimize.pressure_MPa);
    kv("optimize.torque_norm_Nm", c.optimize.torque_norm_Nm);
    kv("optimize.angle_norm_rad", c.optimize.angle_norm_rad);
    kv("optimize.a_min_mm", c.optimize.a_min_mm);
    kv("optimize.a_max_mm", c.optimize.a_max_mm);
    kv("optimize.b_min_mm", c.optimize.b_min_mm);
    kv("optimize.b_max_mm", c.optimize.b_max_mm);
    kv("optimize.h_min_mm", c.optimize.h_min_mm);
    kv("optimize.h_max_mm", c.optimize.h_max_mm);
    kv("optimize.w_min_mm", c.optimize.w_min_mm);
    kv("optimize.w_max_mm", c.optimize.w_max_mm);
    kv("optimize.t_min_mm", c.optimize.t_min_mm);
    kv("optimize.t_max_mm", c.optimize.t_max_mm);
    if (c.optimize.omega_min_rad_s) kv("optimize.omega_min_rad_s", *c.optimize.omega_min_rad_s);
    if (c.optimize.omega_max_rad_s) kv("optimize.omega_max_rad_s", *c.optimize.omega_max_rad_s);
    if (c.optimize.mass_min_kg) kv("optimize.mass_min_kg", *c.optimize.mass_min_kg);
    if (c.optimize.mass_max_kg) kv("optimize.mass_max_kg", *c.optimize.mass_max_kg);
    kv("optimize.grid_step_mm", c.optimize.grid_step_mm);
    if (c.freq.n) kv("freq.n", *c.freq.n);
    kv("control.p", c.control.p);
    kv("control.R", c.control.R);
    kv("control.dt_ms", c.control.dt_ms);
    kv("control.saturation_revps", c.control.saturation_revps);
    kv("control.reference_deg", c.control.reference_deg);
    kb("control.normalized_weights", c.control.normalized_weights);
    if (c.control.omega_n_rad_s) kv("control.omega_n_rad_s", *c.control.omega_n_rad_s);
    if (c.control.zeta) kv("control.zeta", *c.control.zeta);
    kv("control.pump_lead_m", c.control.pump_lead_m);
    kv("control.pump_syringe_area_m2", c.control.pump_syringe_area_m2);
    kv("control.pump_capacity_m3_per_Pa", c.control.pump_capacity_m3_per_Pa);
    kv("control.pump_motor_const", c.control.pump_motor_const);
    kv("sim.dt_ms", c.sim.dt_ms);
    kv("sim.duration_s", c.sim.duration_s);
    kv("eval.pressure_max_MPa", c.eval.pressure_max_MPa);
    kv("eval.pressure_steps", c.eval.pressure_steps);
    kb("report.table1", c.report.table1);
    kb("report.table2", c.report.table2);
    kb("report.table3", c.report.table3);
    return out.str();
}

ActuatorDesign make_design(const RunConfig& c) {
    const CrossSection cs = CrossSection::from_mm(c.geometry.a_mm, c.geometry.b_mm,
                                                  c.geometry.w_mm, c.geometry.t_mm);
    const Material material(c.material.E_MPa * 1e6, c.material.n, c.material.density_kg_m3,
                            c.material.zeta, c.material.zeta_perturb);
    return ActuatorDesign(cs, material, c.actuator.length_mm * 1e-3,
                          c.actuator.mass_override_kg);
}

DesignSpace make_space(const RunConfig& c) {
    DesignSpace space;
    space.a = Interval(c.optimize.a_min_mm * 1e-3, c.optimize.a_max_mm * 1e-3);
    space.b = Interval(c.optimize.b_min_mm * 1e-3, c.optimize.b_max_mm * 1e-3);
    space.h = Interval(c.optimize.h_min_mm * 1e-3, c.optimize.h_max_mm * 1e-3);
    space.w = Interval(c.optimize.w_min_mm * 1e-3, c.optimize.w_max_mm * 1e-3);
    space.t = Interval(c.optimize.t_min_mm * 1e-3, c.optimize.t_max_mm * 1e-3);
    if (c.optimize.omega_min_rad_s)
        space.frequency_band = Interval(*c.optimize.omega_min_rad_s, *c.optimize.omega_max_rad_s);
    if (c.optimize.mass_min_kg)
        space.mass_bounds = Interval(*c.optimize.mass_min_kg, *c.optimize.mass_max_kg);
    return space;
}

PumpModel make_pump(const RunConfig& c) {
    return PumpModel(c.control.pump_syringe_area_m2, c.control.pump_capacity_m3_per_Pa,
                     c.control.pump_motor_const, c.control.pump_lead_m,
                     c.control.saturation_revps);
}

}  // namespace spa
