#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvqkd/thresholds.hpp"

namespace cvqkd {

// One scenario: a rate or threshold computation over an optional sweep,
// optionally repeated over curve overrides. Parsed from a flat key = value
// config file with [sweep], [output], and repeatable [curve] sections;
// command-line flags override file values key by key.
struct ScenarioConfig {
    struct Sweep {
        std::string variable;  // t | v0 | w | frequency
        double from = 0.0;
        double to = 0.0;
        int points = 0;
        std::string scale = "linear";  // linear | log
    };

    std::string mode = "rate";  // rate | threshold
    std::string protocol;       // oneway | twoway
    std::string direction;      // dr | rr
    std::string solve_for;      // w | excess_noise | frequency | transmission

    std::optional<double> v0;
    std::optional<double> w;
    std::optional<double> excess_noise;
    std::optional<double> t;
    std::optional<double> mu;
    std::optional<double> frequency_hz;
    std::optional<double> wavelength_m;
    std::optional<double> temperature_c;
    std::optional<double> alpha_db;
    std::optional<double> unit_length_m;

    std::optional<Sweep> sweep;
    std::string format = "csv";  // csv | json
    std::string output_path = "-";

    // raw per-curve key overrides, applied on top of the base scenario
    std::vector<std::map<std::string, std::string>> curves;
};

// Parses config text / file. Throws std::runtime_error naming the offending
// line or key on malformed input.
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin);
ScenarioConfig parse_scenario_file(const std::string& path);

// Applies one key = value override (flag or [curve] entry) to the config.
// Throws std::runtime_error for unknown keys or unparsable values.
void apply_scenario_override(ScenarioConfig& cfg, const std::string& key,
                             const std::string& value);

// Grid of sweep values, endpoints included; log scale requires from > 0.
std::vector<double> sweep_points(const ScenarioConfig::Sweep& sweep);

// Executes the scenario and returns the complete CSV or JSON document.
// Numbers are printed with 17 significant digits; unbracketed roots become
// textual sentinels, never NaN. Output is a pure function of the config.
std::string run_scenario(const ScenarioConfig& cfg);

// Default temperature in Celsius: CVQKD_DEFAULT_TEMP_C if set, else 15.
double default_temperature_c();

}  // namespace cvqkd
