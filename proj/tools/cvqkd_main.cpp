#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cvqkd/scenario.hpp"

namespace {

// Flags recorded as raw key = value overrides, applied on top of any config
// file so that command-line values win key by key.
using Overrides = std::map<std::string, std::string>;

void add_scenario_flags(CLI::App* cmd, Overrides& kv) {
    static const struct {
        const char* flag;
        const char* key;
        const char* help;
    } kFlags[] = {
        {"--protocol", "protocol", "oneway | twoway"},
        {"--direction", "direction", "dr | rr"},
        {"--v0", "v0", "preparation noise V0 (shot-noise units, >= 1)"},
        {"--w", "w", "entangling-cloner variance W (>= 1)"},
        {"--excess-noise", "excess_noise", "excess noise N; implies W = 1 + N t/(1-t)"},
        {"--t", "t", "channel transmission in (0, 1)"},
        {"--mu", "mu", "modulation variance for the numeric engine (default 1e6)"},
        {"--frequency", "frequency_hz", "carrier frequency in Hz (implies v0 via Planck)"},
        {"--wavelength", "wavelength_m", "carrier wavelength in meters"},
        {"--temp-c", "temperature_c", "environment temperature in Celsius"},
        {"--alpha", "alpha_db", "attenuation, dB per unit length"},
        {"--unit-length", "unit_length_m", "attenuation unit length in meters (default 1)"},
        {"--sweep", "sweep", "variable:from:to:points[:scale], variable in {t,v0,w,frequency}"},
        {"--format", "format", "csv | json"},
        {"--output", "output", "output path, or - for stdout"},
    };
    for (const auto& f : kFlags) {
        const std::string key = f.key;
        cmd->add_option_function<std::string>(
            f.flag, [&kv, key](const std::string& v) { kv[key] = v; }, f.help);
    }
}

cvqkd::ScenarioConfig build_config(const std::string& config_path, const Overrides& kv) {
    cvqkd::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = cvqkd::parse_scenario_file(config_path);
    for (const auto& [key, value] : kv) cvqkd::apply_scenario_override(cfg, key, value);
    return cfg;
}

int write_output(const cvqkd::ScenarioConfig& cfg, const std::string& doc) {
    if (cfg.output_path == "-") {
        std::cout << doc;
        return std::cout.good() ? 0 : 1;
    }
    std::ofstream out(cfg.output_path);
    if (!out) {
        std::cerr << "error: cannot open output file '" << cfg.output_path << "'\n";
        return 1;
    }
    out << doc;
    out.close();
    return out.good() ? 0 : 1;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Security-analysis toolkit for one-way and two-way thermal CV-QKD"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides kv;

    auto* rate = app.add_subcommand("rate", "secret-key rate rows over a sweep");
    rate->add_option("--config", config_path, "scenario config file");
    add_scenario_flags(rate, kv);

    auto* threshold = app.add_subcommand("threshold", "security-threshold rows over a sweep");
    threshold->add_option("--config", config_path, "scenario config file");
    threshold->add_option_function<std::string>(
        "--solve-for", [&kv](const std::string& v) { kv["solve_for"] = v; },
        "w | excess_noise | frequency | transmission");
    add_scenario_flags(threshold, kv);

    auto* sweep = app.add_subcommand("sweep", "run a scenario config file as-is");
    sweep->add_option("--config", config_path, "scenario config file")->required();
    sweep->add_option_function<std::string>(
        "--output", [&kv](const std::string& v) { kv["output"] = v; }, "output path override");
    sweep->add_option_function<std::string>(
        "--format", [&kv](const std::string& v) { kv["format"] = v; }, "format override");

    auto* distance = app.add_subcommand("distance", "convert transmission <-> distance");
    std::optional<double> dist_t, dist_m;
    double dist_alpha = 0.0, dist_unit = 1.0;
    distance->add_option("--t", dist_t, "channel transmission in (0, 1]");
    distance->add_option("--distance-m", dist_m, "link distance in meters");
    distance->add_option("--alpha", dist_alpha, "attenuation, dB per unit length")->required();
    distance->add_option("--unit-length", dist_unit, "unit length in meters (default 1)");

    auto* env = app.add_subcommand("env", "preparation noise V0 of a blackbody environment");
    std::optional<double> env_f, env_lambda, env_temp_c;
    env->add_option("--frequency", env_f, "carrier frequency in Hz");
    env->add_option("--wavelength", env_lambda, "carrier wavelength in meters");
    env->add_option("--temp-c", env_temp_c, "temperature in Celsius (default 15)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rate->parsed() || threshold->parsed() || sweep->parsed()) {
            cvqkd::ScenarioConfig cfg = build_config(config_path, kv);
            if (rate->parsed()) cfg.mode = "rate";
            if (threshold->parsed()) cfg.mode = "threshold";
            return write_output(cfg, cvqkd::run_scenario(cfg));
        }
        if (distance->parsed()) {
            if (dist_t.has_value() == dist_m.has_value()) {
                throw std::runtime_error("distance: give exactly one of --t and --distance-m");
            }
            const cvqkd::AttenuationModel att{dist_alpha, dist_unit};
            std::cout << "alpha_db_per_m=" << fmt17(att.db_per_m()) << "\n";
            if (dist_t) {
                std::cout << "t=" << fmt17(*dist_t) << "\n";
                std::cout << "distance_m=" << fmt17(cvqkd::distance_from_transmission(*dist_t, att))
                          << "\n";
            } else {
                std::cout << "distance_m=" << fmt17(*dist_m) << "\n";
                std::cout << "t=" << fmt17(cvqkd::transmission_from_distance(*dist_m, att)) << "\n";
            }
            return 0;
        }
        // env
        if (env_f.has_value() == env_lambda.has_value()) {
            throw std::runtime_error("env: give exactly one of --frequency and --wavelength");
        }
        const double temp_k =
            (env_temp_c ? *env_temp_c : cvqkd::default_temperature_c()) + 273.15;
        const cvqkd::ThermalEnvironment e =
            env_f ? cvqkd::ThermalEnvironment::from_frequency(*env_f, temp_k)
                  : cvqkd::ThermalEnvironment::from_wavelength(*env_lambda, temp_k);
        std::cout << "frequency_hz=" << fmt17(e.frequency_hz) << "\n";
        std::cout << "wavelength_m=" << fmt17(e.wavelength_m()) << "\n";
        std::cout << "temperature_k=" << fmt17(e.temperature_k) << "\n";
        std::cout << "mean_photon_number=" << fmt17(e.mean_photon_number()) << "\n";
        std::cout << "v0=" << fmt17(e.v0()) << "\n";
        return 0;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
