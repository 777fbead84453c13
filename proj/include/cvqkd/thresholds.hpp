#pragma once

#include <functional>

#include "cvqkd/twoway.hpp"

namespace cvqkd {

enum class Protocol { oneway, twoway };

namespace constants {
// CODATA 2018 exact values.
inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double boltzmann_k = 1.380649e-23;    // J / K
inline constexpr double light_speed = 2.99792458e8;    // m / s
inline constexpr double default_temperature_k = 288.15;
}  // namespace constants

// Blackbody environment fixing the preparation noise V0 = 2 nbar + 1 through
// the Planck occupation nbar = 1 / (exp(h f / k_B t) - 1). Frequency and
// wavelength are mutually exclusive inputs related by lambda = c / f.
struct ThermalEnvironment {
    double temperature_k = constants::default_temperature_k;
    double frequency_hz = 0.0;

    static ThermalEnvironment from_frequency(double f_hz,
                                             double temp_k = constants::default_temperature_k);
    static ThermalEnvironment from_wavelength(double lambda_m,
                                              double temp_k = constants::default_temperature_k);

    double wavelength_m() const { return constants::light_speed / frequency_hz; }
    double mean_photon_number() const;
    double v0() const;
};

double v0_from_environment(const ThermalEnvironment& env);

// Scalar Beer-Lambert attenuation, alpha dB per unit_length meters.
struct AttenuationModel {
    double alpha_db;
    double unit_length_m = 1.0;

    double db_per_m() const;
};

// Asymptotic rate as a function of (v0, t, w), in bits per round.
using RateFn = std::function<double(double v0, double t, double w)>;

RateFn asym_rate_fn(Protocol protocol, Direction direction);

// Bracketed bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs
// (zero counts as either). Converges the bracket to machine precision, so
// the returned root satisfies |f| <= 1e-9 for the rate functions used here.
double bisect_root(const std::function<double(double)>& f, double lo, double hi);

// Noise thresholds at fixed (v0, t): W* is the root of rate(v0, t, W) in W,
// found by factor-2 bracket expansion from W = 1. Returns W* = 1 (N* = 0)
// when the rate is not positive at W = 1 (insecure at all W). Throws
// bracket_error if the rate stays positive beyond W = 1e12 (unbounded).
double solve_threshold_w(const RateFn& rate, double v0, double t);
double solve_threshold_excess_noise(const RateFn& rate, double v0, double t);

enum class ThresholdStatus { ok, secure_at_all, insecure_at_all };

// Minimum tolerable electromagnetic frequency at transmission t: the root of
// rate(V0(f), t, W = V0(f)) over f in [1e9, 1e16] Hz, with the channel noise
// pinned to the preparation noise. Sentinel statuses flag an unbracketed
// root instead of returning NaN: secure_at_all means the rate is already
// nonnegative at 1e9 Hz, insecure_at_all means it is still negative at 1e16.
struct FrequencyThreshold {
    ThresholdStatus status = ThresholdStatus::ok;
    double f_hz = 0.0;
    double lambda_m = 0.0;
};

FrequencyThreshold solve_threshold_frequency(Protocol protocol, Direction direction,
                                             double t_transmission,
                                             double temperature_k = constants::default_temperature_k);

// Security threshold in transmission at fixed (v0, w): smallest t in (0, 1)
// with nonnegative rate. Sentinels as above (rates increase with t).
struct TransmissionThreshold {
    ThresholdStatus status = ThresholdStatus::ok;
    double t = 0.0;
};

TransmissionThreshold solve_threshold_transmission(const RateFn& rate, double v0, double w);

// d = (-10 log10 T) / alpha and its inverse T = 10^(-alpha d / 10).
double distance_from_transmission(double t, const AttenuationModel& att);
double transmission_from_distance(double d_m, const AttenuationModel& att);

}  // namespace cvqkd
