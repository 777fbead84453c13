#include "cvqkd/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cvqkd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

double parse_double(const std::string& key, const std::string& value) {
    size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        fail("config: value for '" + key + "' is not a number: '" + value + "'");
    }
    if (pos != value.size()) {
        fail("config: trailing characters in value for '" + key + "': '" + value + "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_double(key, value);
    if (x != std::floor(x)) fail("config: value for '" + key + "' must be an integer");
    return static_cast<int>(x);
}

// 17 significant digits: enough to round-trip any IEEE-754 double.
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Cell {
    enum class Kind { num, text, empty } kind = Kind::empty;
    std::string payload;

    static Cell num(double x) { return {Kind::num, fmt17(x)}; }
    static Cell text(std::string s) { return {Kind::text, std::move(s)}; }
    static Cell none() { return {}; }
};

std::string csv_cell(const Cell& c) { return c.payload; }

std::string json_cell(const Cell& c) {
    switch (c.kind) {
        case Cell::Kind::num: return c.payload;
        case Cell::Kind::text: return "\"" + c.payload + "\"";
        default: return "null";
    }
}

void parse_sweep_flag(ScenarioConfig& cfg, const std::string& value) {
    // var:from:to:points[:scale]
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(value);
    while (std::getline(is, token, ':')) parts.push_back(token);
    if (parts.size() < 4 || parts.size() > 5) {
        fail("config: sweep must be variable:from:to:points[:scale], got '" + value + "'");
    }
    ScenarioConfig::Sweep s;
    s.variable = parts[0];
    s.from = parse_double("sweep.from", parts[1]);
    s.to = parse_double("sweep.to", parts[2]);
    s.points = parse_int("sweep.points", parts[3]);
    if (parts.size() == 5) s.scale = parts[4];
    cfg.sweep = s;
}

Protocol parse_protocol(const std::string& s) {
    if (s == "oneway") return Protocol::oneway;
    if (s == "twoway") return Protocol::twoway;
    fail("config: protocol must be oneway or twoway, got '" + s + "'");
}

Direction parse_direction(const std::string& s) {
    if (s == "dr") return Direction::dr;
    if (s == "rr") return Direction::rr;
    fail("config: direction must be dr or rr, got '" + s + "'");
}

}  // namespace

double default_temperature_c() {
    if (const char* env = std::getenv("CVQKD_DEFAULT_TEMP_C")) {
        try {
            size_t pos = 0;
            const double c = std::stod(env, &pos);
            if (pos == std::string(env).size()) return c;
        } catch (const std::exception&) {
        }
        fail("CVQKD_DEFAULT_TEMP_C is set but is not a number");
    }
    return 15.0;
}

void apply_scenario_override(ScenarioConfig& cfg, const std::string& key,
                             const std::string& value) {
    if (key == "mode") {
        cfg.mode = value;
    } else if (key == "protocol") {
        cfg.protocol = value;
    } else if (key == "direction") {
        cfg.direction = value;
    } else if (key == "solve_for") {
        cfg.solve_for = value;
    } else if (key == "v0") {
        cfg.v0 = parse_double(key, value);
    } else if (key == "w") {
        cfg.w = parse_double(key, value);
    } else if (key == "excess_noise") {
        cfg.excess_noise = parse_double(key, value);
    } else if (key == "t") {
        cfg.t = parse_double(key, value);
    } else if (key == "mu") {
        cfg.mu = parse_double(key, value);
    } else if (key == "frequency_hz") {
        cfg.frequency_hz = parse_double(key, value);
    } else if (key == "wavelength_m") {
        cfg.wavelength_m = parse_double(key, value);
    } else if (key == "temperature_c") {
        cfg.temperature_c = parse_double(key, value);
    } else if (key == "alpha_db") {
        cfg.alpha_db = parse_double(key, value);
    } else if (key == "unit_length_m") {
        cfg.unit_length_m = parse_double(key, value);
    } else if (key == "sweep") {
        parse_sweep_flag(cfg, value);
    } else if (key == "format") {
        cfg.format = value;
    } else if (key == "output" || key == "path") {
        cfg.output_path = value;
    } else {
        fail("config: unknown key '" + key + "'");
    }
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') fail(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section != "sweep" && section != "output" && section != "curve") {
                fail(origin + ":" + std::to_string(lineno) + ": unknown section [" + section + "]");
            }
            if (section == "curve") cfg.curves.emplace_back();
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail(origin + ":" + std::to_string(lineno) + ": empty key or value");
        }
        if (section.empty()) {
            apply_scenario_override(cfg, key, value);
        } else if (section == "sweep") {
            if (!cfg.sweep) cfg.sweep.emplace();
            if (key == "variable") {
                cfg.sweep->variable = value;
            } else if (key == "from") {
                cfg.sweep->from = parse_double("sweep.from", value);
            } else if (key == "to") {
                cfg.sweep->to = parse_double("sweep.to", value);
            } else if (key == "points") {
                cfg.sweep->points = parse_int("sweep.points", value);
            } else if (key == "scale") {
                cfg.sweep->scale = value;
            } else {
                fail(origin + ":" + std::to_string(lineno) + ": unknown sweep key '" + key + "'");
            }
        } else if (section == "output") {
            if (key == "format") {
                cfg.format = value;
            } else if (key == "path") {
                cfg.output_path = value;
            } else {
                fail(origin + ":" + std::to_string(lineno) + ": unknown output key '" + key + "'");
            }
        } else {  // curve
            static const char* const banned[] = {"mode", "solve_for", "sweep", "format",
                                                 "output", "path", "alpha_db", "unit_length_m"};
            for (const char* b : banned) {
                if (key == b) {
                    fail(origin + ":" + std::to_string(lineno) + ": '" + key +
                         "' cannot vary per curve");
                }
            }
            cfg.curves.back()[key] = value;
        }
    }
    return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::vector<double> sweep_points(const ScenarioConfig::Sweep& sweep) {
    if (sweep.variable != "t" && sweep.variable != "v0" && sweep.variable != "w" &&
        sweep.variable != "frequency") {
        fail("config: sweep variable must be t, v0, w, or frequency, got '" + sweep.variable + "'");
    }
    if (!(sweep.from < sweep.to)) fail("config: sweep requires from < to");
    if (sweep.points < 2) fail("config: sweep requires points >= 2");
    const bool log_scale = sweep.scale == "log";
    if (!log_scale && sweep.scale != "linear") {
        fail("config: sweep scale must be linear or log, got '" + sweep.scale + "'");
    }
    if (log_scale && sweep.from <= 0.0) fail("config: log sweep requires from > 0");
    std::vector<double> xs(static_cast<size_t>(sweep.points));
    for (int i = 0; i < sweep.points; ++i) {
        const double frac = static_cast<double>(i) / (sweep.points - 1);
        xs[static_cast<size_t>(i)] =
            log_scale ? std::exp(std::log(sweep.from) + frac * (std::log(sweep.to) - std::log(sweep.from)))
                      : sweep.from + frac * (sweep.to - sweep.from);
    }
    xs.front() = sweep.from;
    xs.back() = sweep.to;
    return xs;
}

namespace {

// Effective single-curve scenario with the sweep value substituted in.
struct PointParams {
    Protocol protocol;
    Direction direction;
    double t = 0.0;
    double v0 = 0.0;
    double w = 0.0;
    double mu = 1e6;
    double temperature_k = constants::default_temperature_k;
};

double resolved_temperature_k(const ScenarioConfig& cfg) {
    const double celsius = cfg.temperature_c ? *cfg.temperature_c : default_temperature_c();
    return celsius + 273.15;
}

// Applies the sweep value and resolves v0 / w sources for modes that need
// concrete protocol parameters (rate; threshold in w and transmission).
PointParams resolve_point(const ScenarioConfig& cfg, const std::string& sweep_var, double x,
                          bool need_t, bool need_w) {
    ScenarioConfig c = cfg;
    if (sweep_var == "t") {
        if (c.t) fail("config: t is both fixed and swept");
        c.t = x;
    } else if (sweep_var == "v0") {
        if (c.v0) fail("config: v0 is both fixed and swept");
        c.v0 = x;
    } else if (sweep_var == "w") {
        if (c.w) fail("config: w is both fixed and swept");
        c.w = x;
    } else if (sweep_var == "frequency") {
        if (c.frequency_hz) fail("config: frequency is both fixed and swept");
        c.frequency_hz = x;
    }

    PointParams p;
    p.protocol = parse_protocol(c.protocol);
    p.direction = parse_direction(c.direction);
    p.temperature_k = resolved_temperature_k(c);
    p.mu = c.mu ? *c.mu : 1e6;

    if (need_t) {
        if (!c.t) fail("config: t is required (fix it or sweep it)");
        p.t = *c.t;
    }

    const int v0_sources = (c.v0 ? 1 : 0) + (c.frequency_hz ? 1 : 0) + (c.wavelength_m ? 1 : 0);
    if (v0_sources != 1) {
        fail("config: exactly one of v0, frequency_hz, wavelength_m is required");
    }
    bool env_derived = false;
    if (c.v0) {
        p.v0 = *c.v0;
    } else {
        const ThermalEnvironment env =
            c.frequency_hz ? ThermalEnvironment::from_frequency(*c.frequency_hz, p.temperature_k)
                           : ThermalEnvironment::from_wavelength(*c.wavelength_m, p.temperature_k);
        p.v0 = env.v0();
        env_derived = true;
    }

    if (need_w) {
        const int w_sources = (c.w ? 1 : 0) + (c.excess_noise ? 1 : 0);
        if (w_sources > 1) fail("config: w and excess_noise are mutually exclusive");
        if (c.w) {
            p.w = *c.w;
        } else if (c.excess_noise) {
            if (!need_t) fail("config: excess_noise needs a fixed t to derive w");
            p.w = w_from_excess_noise(*c.excess_noise, p.t);
        } else if (env_derived) {
            p.w = p.v0;  // blackbody convention: channel noise equals preparation noise
        } else {
            fail("config: w (or excess_noise) is required");
        }
    }
    return p;
}

std::string emit(const ScenarioConfig& cfg, const std::vector<std::string>& header,
                 const std::vector<std::vector<Cell>>& rows) {
    std::ostringstream os;
    if (cfg.format == "csv") {
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) os << ',';
            os << header[i];
        }
        os << '\n';
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                os << csv_cell(row[i]);
            }
            os << '\n';
        }
    } else if (cfg.format == "json") {
        os << "[\n";
        for (size_t r = 0; r < rows.size(); ++r) {
            os << '{';
            for (size_t i = 0; i < header.size(); ++i) {
                if (i) os << ',';
                os << '"' << header[i] << "\":" << json_cell(rows[r][i]);
            }
            os << '}' << (r + 1 < rows.size() ? ",\n" : "\n");
        }
        os << "]\n";
    } else {
        fail("config: format must be csv or json, got '" + cfg.format + "'");
    }
    return os.str();
}

std::vector<ScenarioConfig> expand_curves(const ScenarioConfig& cfg) {
    if (cfg.curves.empty()) {
        ScenarioConfig base = cfg;
        base.curves.clear();
        return {base};
    }
    std::vector<ScenarioConfig> out;
    for (const auto& overrides : cfg.curves) {
        ScenarioConfig c = cfg;
        c.curves.clear();
        for (const auto& [key, value] : overrides) apply_scenario_override(c, key, value);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<double> curve_sweep_values(const ScenarioConfig& cfg) {
    if (cfg.sweep) return sweep_points(*cfg.sweep);
    return {0.0};  // single point; sentinel value is never read
}

void run_rate_rows(const ScenarioConfig& curve, std::vector<std::vector<Cell>>& rows) {
    const std::string var = curve.sweep ? curve.sweep->variable : "";
    for (double x : curve_sweep_values(curve)) {
        PointParams p;
        try {
            p = resolve_point(curve, var, x, /*need_t=*/true, /*need_w=*/true);
        } catch (const std::exception& e) {
            if (!var.empty()) fail(std::string(e.what()) + " (at sweep point " + var + " = " + fmt17(x) + ")");
            throw;
        }
        RateBreakdown rb;
        try {
            if (p.protocol == Protocol::oneway) {
                rb = rate_oneway_numeric(OneWayParams{p.v0, p.mu, p.t, p.w}, p.direction);
            } else {
                rb = rate_twoway_numeric(TwoWayParams{p.v0, p.mu, p.t, p.w}, p.direction);
            }
        } catch (const std::exception& e) {
            fail(std::string(e.what()) + " (at sweep point " + (var.empty() ? "t" : var) + " = " +
                 fmt17(var.empty() ? p.t : x) + ")");
        }
        rows.push_back({Cell::text(curve.protocol), Cell::text(curve.direction), Cell::num(p.v0),
                        Cell::num(p.w), Cell::num(p.t), Cell::num(p.mu), Cell::num(rb.mutual_info),
                        Cell::num(rb.holevo), Cell::num(rb.rate)});
    }
}

void run_threshold_rows(const ScenarioConfig& curve, std::vector<std::vector<Cell>>& rows) {
    const std::string var = curve.sweep ? curve.sweep->variable : "";
    const bool with_distance = curve.alpha_db.has_value();
    AttenuationModel att{curve.alpha_db.value_or(1.0), curve.unit_length_m.value_or(1.0)};

    for (double x : curve_sweep_values(curve)) {
        if (curve.solve_for == "w" || curve.solve_for == "excess_noise") {
            if (curve.w || curve.excess_noise) fail("config: w is being solved for, do not fix it");
            const PointParams p = resolve_point(curve, var, x, true, false);
            const RateFn rate = asym_rate_fn(p.protocol, p.direction);
            Cell wcell, ncell;
            try {
                const double wstar = solve_threshold_w(rate, p.v0, p.t);
                wcell = Cell::num(wstar);
                ncell = Cell::num(excess_noise_from_w(wstar, p.t));
            } catch (const bracket_error&) {
                wcell = Cell::text("unbounded");
                ncell = Cell::text("unbounded");
            }
            rows.push_back({Cell::text(curve.protocol), Cell::text(curve.direction),
                            Cell::num(p.v0), Cell::num(p.t), wcell, ncell});
        } else if (curve.solve_for == "frequency") {
            if (curve.v0 || curve.frequency_hz || curve.wavelength_m) {
                fail("config: frequency threshold derives v0 = w from the solved frequency; "
                     "do not fix v0, frequency_hz, or wavelength_m");
            }
            ScenarioConfig c = curve;
            c.v0 = 1.0;  // satisfies the v0-source check; unused by the solver
            const PointParams p = resolve_point(c, var, x, true, false);
            const FrequencyThreshold ft =
                solve_threshold_frequency(p.protocol, p.direction, p.t, p.temperature_k);
            Cell fcell, lcell;
            if (ft.status == ThresholdStatus::ok) {
                fcell = Cell::num(ft.f_hz);
                lcell = Cell::num(ft.lambda_m);
            } else {
                fcell = Cell::text(ft.status == ThresholdStatus::secure_at_all ? "secure_at_all_f"
                                                                               : "insecure_at_all_f");
                lcell = Cell::none();
            }
            std::vector<Cell> row{Cell::text(curve.protocol), Cell::text(curve.direction),
                                  Cell::num(p.t), Cell::num(p.temperature_k), fcell, lcell};
            if (with_distance) {
                row.push_back(Cell::num(att.db_per_m()));
                row.push_back(Cell::num(distance_from_transmission(p.t, att)));
            }
            rows.push_back(std::move(row));
        } else if (curve.solve_for == "transmission") {
            if (curve.t) fail("config: t is being solved for, do not fix it");
            if (curve.excess_noise) fail("config: excess_noise needs t, which is being solved for");
            const PointParams p = resolve_point(curve, var, x, false, true);
            const RateFn rate = asym_rate_fn(p.protocol, p.direction);
            const TransmissionThreshold tt = solve_threshold_transmission(rate, p.v0, p.w);
            Cell tcell, dcell;
            if (tt.status == ThresholdStatus::ok) {
                tcell = Cell::num(tt.t);
                dcell = with_distance ? Cell::num(distance_from_transmission(tt.t, att)) : Cell::none();
            } else if (tt.status == ThresholdStatus::secure_at_all) {
                tcell = Cell::text("secure_at_all_t");
                dcell = with_distance ? Cell::text("inf") : Cell::none();
            } else {
                tcell = Cell::text("insecure_at_all_t");
                dcell = Cell::none();
            }
            std::vector<Cell> row{Cell::text(curve.protocol), Cell::text(curve.direction),
                                  Cell::num(p.v0), Cell::num(p.w), tcell};
            if (with_distance) {
                row.push_back(Cell::num(att.db_per_m()));
                row.push_back(dcell);
            }
            rows.push_back(std::move(row));
        } else {
            fail("config: solve_for must be w, excess_noise, frequency, or transmission, got '" +
                 curve.solve_for + "'");
        }
    }
}

}  // namespace

std::string run_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> header;
    if (cfg.mode == "rate") {
        header = {"protocol", "direction", "v0",  "w", "t", "mu",
                  "mutual_info_bits", "holevo_bits", "rate_bits"};
    } else if (cfg.mode == "threshold") {
        if (cfg.solve_for == "w" || cfg.solve_for == "excess_noise") {
            header = {"protocol", "direction", "v0", "t", "w_threshold", "excess_noise_threshold"};
        } else if (cfg.solve_for == "frequency") {
            header = {"protocol", "direction", "t", "temperature_k", "f_threshold_hz", "lambda_m"};
            if (cfg.alpha_db) {
                header.push_back("alpha_db_per_m");
                header.push_back("max_distance_m");
            }
        } else if (cfg.solve_for == "transmission") {
            header = {"protocol", "direction", "v0", "w", "t_threshold"};
            if (cfg.alpha_db) {
                header.push_back("alpha_db_per_m");
                header.push_back("max_distance_m");
            }
        } else {
            fail("config: solve_for must be w, excess_noise, frequency, or transmission, got '" +
                 cfg.solve_for + "'");
        }
    } else {
        fail("config: mode must be rate or threshold, got '" + cfg.mode + "'");
    }

    std::vector<std::vector<Cell>> rows;
    for (const ScenarioConfig& curve : expand_curves(cfg)) {
        if (cfg.mode == "rate") {
            run_rate_rows(curve, rows);
        } else {
            run_threshold_rows(curve, rows);
        }
    }
    return emit(cfg, header, rows);
}

}  // namespace cvqkd
