#pragma once

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

// Classical post-processing direction: direct reconciliation (Bob estimates
// Alice's variable) or reverse reconciliation (Alice estimates Bob's).
enum class Direction { dr, rr };

// Parameters of the one-way thermal protocol under a collective
// entangling-cloner attack. All variances in shot-noise units.
struct OneWayParams {
    double v0;  // preparation noise V0 = 1 + eta, >= 1
    double va;  // Gaussian modulation variance, > 0
    double t;   // channel transmission, in (0, 1)
    double w;   // entangling-cloner variance, >= 1

    void validate() const;
};

// One protocol evaluation in bits per round. rate == mutual_info - holevo
// holds as an exact arithmetic identity.
struct RateBreakdown {
    double mutual_info;
    double holevo;
    double rate;
    Direction direction;
};

// Lambda(x, y) := T x + (1 - T) y.
double lambda_fn(double x, double y, double t);

// CM of Eve's output modes (E', E''):
// [[W I, sqrt(T(W^2-1)) Z], [sqrt(T(W^2-1)) Z, (TW + (1-T)(Va+V0)) I]].
CovarianceMatrix eve_cm_oneway(const OneWayParams& p);

// I(a:b) = (1/2) log2(1 + T Va / Lambda(V0, W)) bits.
double mutual_info_oneway(const OneWayParams& p);

// Asymptotic (large-modulation) secret-key rates in bits per round.
double rate_dr_oneway_asym(double v0, double t, double w);
double rate_rr_oneway_asym(double v0, double t, double w);

// Finite-modulation rate assembled from covariance matrices: I(a:b) minus
// the Holevo bound S(E) - S(E|x) with the conditional state from either the
// encoding-variance removal (DR) or homodyne conditioning of the joint
// Eve-Bob CM (RR). Converges to the asymptotic forms as va grows.
RateBreakdown rate_oneway_numeric(const OneWayParams& p, Direction direction);

// Excess noise referred to the channel input, N = (W-1)(1-T)/T, and its
// inverse W = 1 + N T/(1-T).
double excess_noise_from_w(double w, double t);
double w_from_excess_noise(double n, double t);

}  // namespace cvqkd
