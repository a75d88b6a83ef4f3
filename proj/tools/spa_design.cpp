#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spa/cli.hpp"
#include "spa/config.hpp"
#include "spa/errors.hpp"

namespace {

enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kConfig = 2,
    kInfeasible = 3,
    kNumeric = 4,
};

spa::RunConfig load_config(const std::string& path_flag) {
    std::string path = path_flag;
    if (path.empty()) {
        if (const char* env = std::getenv("SPA_DESIGN_CONFIG")) path = env;
    }
    if (path.empty()) return spa::RunConfig{};
    return spa::parse_config(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design, analysis and closed-loop control toolkit for soft pneumatic "
                 "bending actuators"};
    app.require_subcommand(1);

    std::string config_path;
    spa::cli::CommandOptions opts;
    app.add_option("--config", config_path,
                   "Configuration file (falls back to $SPA_DESIGN_CONFIG)");
    app.add_option("--out", opts.out_dir, "Output directory for CSV files");
    app.add_option("--seed", opts.seed, "Seed for the multi-start optimizer");
    app.add_flag("--csv", opts.csv, "Also emit machine-readable CSV tables");

    auto* eval = app.add_subcommand("eval", "Sweep pressure and report torque/angle/objective");
    auto* optimize = app.add_subcommand("optimize", "Run the solver and the grid oracle");
    auto* freq = app.add_subcommand("freq", "Natural-frequency estimate and identification");
    std::string trace_csv;
    freq->add_option("--trace", trace_csv, "Step-trace CSV (time_s, angle_rad) to identify");
    auto* control = app.add_subcommand("control", "LQR synthesis and closed-loop simulation");
    auto* report = app.add_subcommand("report", "Replicate the bundled reference tables");
    auto* fit = app.add_subcommand("fit-n", "Fit the stress-strain exponent from a CSV");
    std::string fit_csv;
    fit->add_option("--data", fit_csv, "Two-column CSV: strain, stress_Pa")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        std::filesystem::create_directories(opts.out_dir);
        if (fit->parsed()) return spa::cli::cmd_fit_n(fit_csv, std::cout);

        const spa::RunConfig config = load_config(config_path);
        if (eval->parsed()) return spa::cli::cmd_eval(config, opts, std::cout);
        if (optimize->parsed()) return spa::cli::cmd_optimize(config, opts, std::cout);
        if (freq->parsed()) return spa::cli::cmd_freq(config, opts, trace_csv, std::cout);
        if (control->parsed()) return spa::cli::cmd_control(config, opts, std::cout);
        if (report->parsed()) return spa::cli::cmd_report(config, opts, std::cout);
        std::cerr << "error: no subcommand\n";
        return kUsage;
    } catch (const spa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const spa::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const spa::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const spa::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
}
