#pragma once

#include "cvqkd/oneway.hpp"

namespace cvqkd {

// Parameters of the two-way thermal protocol (ON configuration) under a
// collective attack with two independent entangling cloners of variance W.
struct TwoWayParams {
    double v0;  // preparation noise at both stations, >= 1
    double mu;  // modulation variance (V_b1 = V_a = mu), > 0
    double t;   // transmission of each pass, in (0, 1)
    double w;   // cloner variance, >= 1

    void validate() const;
};

// Scalar coefficients of Eve's 4-mode CM (modes E1', E1'', E2', E2'').
// delta(x, y) = gamma I + (1-T) diag(x, y) completes the E2' block.
struct EveCM4Params {
    double epsilon;  // (1-T) V_B1 + T W
    double chi;      // -sqrt(T) (1-T) (W - V_B1)
    double theta;    // -(1-T) sqrt(W^2 - 1)
    double gamma;    // T(1-T) V_B1 + (1 - T + T^2) W
    double phi;      // sqrt(T (W^2 - 1))
};

EveCM4Params eve_cm_twoway_params(const TwoWayParams& p);

// Eve's 8x8 CM with Delta(delta_x, delta_y) in the E2' block. The full state
// uses (mu, mu); conditioning on Alice's encoded quadrature gives (0, mu).
CovarianceMatrix eve_cm_twoway(const TwoWayParams& p, double delta_x, double delta_y);

// Variance of Bob's post-processed output b = b2 - T b1:
// V_b = T^2 V0 + T mu + (1 - T^2) W. The conditional V_{b|a} is the same
// expression at mu = 0.
double bob_output_variance(const TwoWayParams& p);

// I(a:b) = (1/2) log2(V_b / V_{b|a}) bits.
double mutual_info_twoway(const TwoWayParams& p);

// Asymptotic (large-modulation) rates in bits per protocol round.
double rate_dr_twoway_asym(double v0, double t, double w);
double rate_rr_twoway_asym(double v0, double t, double w);

// Surviving finite eigenvalue of Eve's CM conditioned on Bob's homodyne
// outcome, nu2 = sqrt(W (1 + T^2 V0 W + T^3 (1 - V0 W)) / K) with
// K = T^2 V0 + W + T^3 (W - V0). Used inside rate_rr_twoway_asym.
double rr_conditional_nu2_asym(double v0, double t, double w);

// Correlations between Eve's four modes and Bob's post-processed mode:
// D^T = (xi1 I, phi1 Z, xi2 I, phi2 Z).
Eigen::Matrix<double, 8, 2> rr_conditional_correlations(const TwoWayParams& p);

// Finite-modulation rate from the covariance matrices: DR conditions Eve's
// CM on Alice's encoding, RR homodyne-conditions the joint Eve-Bob CM.
RateBreakdown rate_twoway_numeric(const TwoWayParams& p, Direction direction);

}  // namespace cvqkd
