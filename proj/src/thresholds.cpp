#include "cvqkd/thresholds.hpp"

#include <cmath>
#include <sstream>

namespace cvqkd {

ThermalEnvironment ThermalEnvironment::from_frequency(double f_hz, double temp_k) {
    if (f_hz <= 0.0) throw std::domain_error("ThermalEnvironment: frequency must be > 0");
    if (temp_k <= 0.0) throw std::domain_error("ThermalEnvironment: temperature must be > 0");
    return ThermalEnvironment{temp_k, f_hz};
}

ThermalEnvironment ThermalEnvironment::from_wavelength(double lambda_m, double temp_k) {
    if (lambda_m <= 0.0) throw std::domain_error("ThermalEnvironment: wavelength must be > 0");
    return from_frequency(constants::light_speed / lambda_m, temp_k);
}

double ThermalEnvironment::mean_photon_number() const {
    const double x = constants::planck_h * frequency_hz / (constants::boltzmann_k * temperature_k);
    if (x > 700.0) return 0.0;  // exp would overflow; occupation is ~ 0
    return 1.0 / std::expm1(x);
}

double ThermalEnvironment::v0() const { return v0_from_environment(*this); }

double v0_from_environment(const ThermalEnvironment& env) {
    if (env.frequency_hz <= 0.0 || env.temperature_k <= 0.0) {
        throw std::domain_error("v0_from_environment: frequency and temperature must be > 0");
    }
    return 2.0 * env.mean_photon_number() + 1.0;
}

double AttenuationModel::db_per_m() const {
    if (alpha_db <= 0.0 || unit_length_m <= 0.0) {
        throw std::domain_error("AttenuationModel: alpha and unit length must be > 0");
    }
    return alpha_db / unit_length_m;
}

RateFn asym_rate_fn(Protocol protocol, Direction direction) {
    if (protocol == Protocol::oneway) {
        return direction == Direction::dr ? RateFn(&rate_dr_oneway_asym)
                                          : RateFn(&rate_rr_oneway_asym);
    }
    return direction == Direction::dr ? RateFn(&rate_dr_twoway_asym)
                                      : RateFn(&rate_rr_twoway_asym);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os << "bisect_root: no sign change on [" << lo << ", " << hi << "]";
        throw bracket_error(os.str());
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at machine precision
        const double fmid = f(mid);
        if ((flo > 0.0) == (fmid > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_threshold_w(const RateFn& rate, double v0, double t) {
    if (rate(v0, t, 1.0) <= 0.0) return 1.0;  // insecure at all W
    double lo = 1.0;
    double hi = 2.0;
    while (rate(v0, t, hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw bracket_error("solve_threshold_w: rate positive beyond W = 1e12");
    }
    return bisect_root([&](double w) { return rate(v0, t, w); }, lo, hi);
}

double solve_threshold_excess_noise(const RateFn& rate, double v0, double t) {
    return excess_noise_from_w(solve_threshold_w(rate, v0, t), t);
}

FrequencyThreshold solve_threshold_frequency(Protocol protocol, Direction direction,
                                             double t_transmission, double temperature_k) {
    const RateFn rate = asym_rate_fn(protocol, direction);
    auto rate_at = [&](double f_hz) {
        const double v0 = ThermalEnvironment::from_frequency(f_hz, temperature_k).v0();
        return rate(v0, t_transmission, v0);
    };
    constexpr double f_min = 1e9;
    constexpr double f_max = 1e16;
    FrequencyThreshold out;
    if (rate_at(f_min) >= 0.0) {
        out.status = ThresholdStatus::secure_at_all;
        out.f_hz = f_min;
    } else if (rate_at(f_max) < 0.0) {
        out.status = ThresholdStatus::insecure_at_all;
        out.f_hz = f_max;
    } else {
        out.f_hz = bisect_root(rate_at, f_min, f_max);
    }
    out.lambda_m = constants::light_speed / out.f_hz;
    return out;
}

TransmissionThreshold solve_threshold_transmission(const RateFn& rate, double v0, double w) {
    constexpr double t_min = 1e-9;
    constexpr double t_max = 1.0 - 1e-9;
    TransmissionThreshold out;
    if (rate(v0, t_min, w) >= 0.0) {
        out.status = ThresholdStatus::secure_at_all;
        out.t = t_min;
    } else if (rate(v0, t_max, w) < 0.0) {
        out.status = ThresholdStatus::insecure_at_all;
        out.t = t_max;
    } else {
        out.t = bisect_root([&](double t) { return rate(v0, t, w); }, t_min, t_max);
    }
    return out;
}

double distance_from_transmission(double t, const AttenuationModel& att) {
    if (t <= 0.0 || t >= 1.0) {
        if (t == 1.0) return 0.0;
        throw std::domain_error("distance_from_transmission: t must be in (0, 1]");
    }
    return -10.0 * std::log10(t) / att.db_per_m();
}

double transmission_from_distance(double d_m, const AttenuationModel& att) {
    if (d_m < 0.0) throw std::domain_error("transmission_from_distance: d must be >= 0");
    return std::pow(10.0, -att.db_per_m() * d_m / 10.0);
}

}  // namespace cvqkd
