#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cvqkd/errors.hpp"
#include "cvqkd/thresholds.hpp"
#include "cvqkd/twoway.hpp"

using namespace cvqkd;

namespace {
bool near_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool near_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((TwoWayParams{0.9, 1.0, 0.5, 1.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((TwoWayParams{1.0, -1.0, 0.5, 1.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((TwoWayParams{1.0, 1.0, 1.0, 1.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((TwoWayParams{1.0, 1.0, 0.5, 0.5}.validate()), std::domain_error);
    TwoWayParams ok{1.0, 4.0, 0.5, 2.0};
    ok.validate();
}

TEST_CASE("CM coefficients at a reference point") {
    TwoWayParams p{1.0, 4.0, 0.5, 2.0};  // V_B1 = V0 + mu = 5
    EveCM4Params c = eve_cm_twoway_params(p);
    CHECK(near_abs(c.epsilon, 0.5 * 5.0 + 0.5 * 2.0, 1e-15));
    CHECK(near_abs(c.chi, -std::sqrt(0.5) * 0.5 * (2.0 - 5.0), 1e-15));
    CHECK(near_abs(c.theta, -0.5 * std::sqrt(3.0), 1e-15));
    CHECK(near_abs(c.gamma, 0.25 * 5.0 + 0.75 * 2.0, 1e-15));
    CHECK(near_abs(c.phi, std::sqrt(0.5 * 3.0), 1e-15));
}

TEST_CASE("coefficient couplings vanish on a pure-loss channel") {
    TwoWayParams p{1.0, 4.0, 0.3, 1.0};
    EveCM4Params c = eve_cm_twoway_params(p);
    CHECK(c.theta == 0.0);
    CHECK(c.phi == 0.0);
    // the beam-splitter coupling survives; with V_B1 = 5 above W = 1 it is
    // -sqrt(t) (1-t) (w - v_b1) = +sqrt(0.3) * 0.7 * 4
    CHECK(near_abs(c.chi, std::sqrt(0.3) * 0.7 * 4.0, 1e-15));
}

TEST_CASE("Eve's 8x8 CM layout") {
    TwoWayParams p{1.0, 4.0, 0.5, 2.0};
    EveCM4Params c = eve_cm_twoway_params(p);
    CovarianceMatrix v = eve_cm_twoway(p, p.mu, p.mu);
    REQUIRE(v.modes() == 4);
    CHECK(near_abs(v(0, 0), c.epsilon, 1e-15));
    CHECK(near_abs(v(2, 2), 2.0, 1e-15));       // first cloner mode, variance W
    CHECK(near_abs(v(6, 6), 2.0, 1e-15));       // second cloner mode
    CHECK(near_abs(v(0, 2), c.phi, 1e-15));     // E1'-E1'' coupling, Z pattern
    CHECK(near_abs(v(1, 3), -c.phi, 1e-15));
    CHECK(near_abs(v(0, 4), c.chi, 1e-15));     // E1'-E2' coupling, identity pattern
    CHECK(near_abs(v(1, 5), c.chi, 1e-15));
    CHECK(near_abs(v(2, 4), c.theta, 1e-15));   // E1''-E2' coupling, Z pattern
    CHECK(near_abs(v(3, 5), -c.theta, 1e-15));
    CHECK(near_abs(v(4, 6), c.phi, 1e-15));     // E2'-E2'' coupling
    // Delta block carries the encoding noise
    CHECK(near_abs(v(4, 4), c.gamma + (1.0 - p.t) * p.mu, 1e-15));
    CHECK(near_abs(v(5, 5), c.gamma + (1.0 - p.t) * p.mu, 1e-15));
    CovarianceMatrix vc = eve_cm_twoway(p, 0.0, p.mu);
    CHECK(near_abs(vc(4, 4), c.gamma, 1e-15));
    CHECK(near_abs(vc(5, 5), c.gamma + (1.0 - p.t) * p.mu, 1e-15));
    // untouched elsewhere
    CHECK(vc(0, 0) == v(0, 0));
    CHECK(vc(0, 6) == 0.0);
}

TEST_CASE("Eve's CM is physical across parameter ranges") {
    for (double t : {0.1, 0.5, 0.9})
        for (double w : {1.0, 2.0, 10.0})
            for (double v0 : {1.0, 5.0, 100.0}) {
                TwoWayParams p{v0, 1e6, t, w};
                CHECK_NOTHROW(symplectic_eigenvalues(eve_cm_twoway(p, p.mu, p.mu)));
                CHECK_NOTHROW(symplectic_eigenvalues(eve_cm_twoway(p, 0.0, p.mu)));
            }
}

TEST_CASE("spectral asymptotics of the full and DR-conditioned CMs") {
    TwoWayParams p{1.0, 1e6, 0.5, 2.0};

    SymplecticSpectrum full = symplectic_eigenvalues(eve_cm_twoway(p, p.mu, p.mu));
    REQUIRE(full.values.size() == 4);
    CHECK(near_rel(full.values[0], p.w, 1e-3));
    CHECK(near_rel(full.values[1], p.w, 1e-3));
    CHECK(near_rel(full.values[2] * full.values[3],
                   (1.0 - p.t) * (1.0 - p.t) * p.mu * p.mu, 1e-3));
    // frozen from an independent evaluation
    CHECK(near_rel(full.values[0], 1.9999888040218108, 1e-9));
    CHECK(near_rel(full.values[1], 1.9999991961551853, 1e-9));
    CHECK(near_rel(full.values[2], 250001.9166555928, 1e-9));
    CHECK(near_rel(full.values[3], 1000001.3333324081, 1e-9));

    SymplecticSpectrum cond = symplectic_eigenvalues(eve_cm_twoway(p, 0.0, p.mu));
    REQUIRE(cond.values.size() == 4);
    CHECK(near_rel(cond.values[0], 1.0, 1e-3));
    CHECK(near_rel(cond.values[1], p.w, 1e-3));
    double tail = (1.0 - p.t) * std::sqrt((1.0 - p.t * p.t) * p.w * p.mu * p.mu * p.mu);
    CHECK(near_rel(cond.values[2] * cond.values[3], tail, 1e-3));
    CHECK(near_rel(cond.values[0], 0.9999999999684268, 1e-9));
    CHECK(near_rel(cond.values[1], 1.999999000003833, 1e-9));
    CHECK(near_rel(cond.values[2], 738.5496696662028, 1e-9));
    CHECK(near_rel(cond.values[3], 829157.5269787086, 1e-9));
}

TEST_CASE("Bob's processed output variance") {
    TwoWayParams p{1.0, 4.0, 0.5, 1.0};
    CHECK(near_abs(bob_output_variance(p), 3.0, 1e-15));
    TwoWayParams q{1.0, 0.0, 0.5, 1.0};
    CHECK(near_abs(bob_output_variance(q), 1.0, 1e-15));
    // near-transparent channel: output is almost the vacuum again
    TwoWayParams r{1.0, 0.0, 0.999, 1.0};
    CHECK(near_abs(bob_output_variance(r), 1.0, 1e-2));
}

TEST_CASE("mutual information") {
    TwoWayParams p{1.0, 4.0, 0.5, 1.0};
    CHECK(near_abs(mutual_info_twoway(p), 0.792481250360578, 1e-12));
    TwoWayParams tiny{1.0, 1e-12, 0.5, 1.0};
    CHECK(near_abs(mutual_info_twoway(tiny), 0.0, 1e-9));
}

TEST_CASE("asymptotic DR rate and thresholds") {
    CHECK(near_abs(rate_dr_twoway_asym(1.0, 0.5, 1.0), 0.2924812503605781, 1e-12));

    RateFn dr = asym_rate_fn(Protocol::twoway, Direction::dr);
    TransmissionThreshold t1 = solve_threshold_transmission(dr, 1.0, 1.0);
    REQUIRE(t1.status == ThresholdStatus::ok);
    CHECK(near_abs(t1.t, std::sqrt(2.0) - 1.0, 1e-9));

    TransmissionThreshold t10 = solve_threshold_transmission(dr, 10.0, 1.0);
    REQUIRE(t10.status == ThresholdStatus::ok);
    CHECK(near_abs(t10.t, 0.7860129566523044, 1e-9));

    // threshold transmission grows with the preparation noise
    double prev = 0.0;
    for (double v0 : {1.0, 5.0, 10.0, 100.0}) {
        TransmissionThreshold th = solve_threshold_transmission(dr, v0, 1.0);
        REQUIRE(th.status == ThresholdStatus::ok);
        CHECK(th.t > prev);
        prev = th.t;
    }
    CHECK(near_abs(prev, 0.9798022721265014, 1e-9));
}

TEST_CASE("asymptotic RR rate stays positive on pure loss") {
    CHECK(near_abs(rate_rr_twoway_asym(1.0, 0.5, 1.0), 0.6609640474436812, 1e-12));
    CHECK(near_abs(rate_rr_twoway_asym(10.0, 0.5, 1.0), 0.2737438976512466, 1e-12));
    CHECK(near_abs(rate_rr_twoway_asym(1.0, 1e-9, 1.0), 0.0, 1e-6));
    for (double t : {0.02, 0.2, 0.5, 0.8, 0.98})
        for (double v0 : {1.0, 10.0, 100.0, 1000.0})
            CHECK(rate_rr_twoway_asym(v0, t, 1.0) > 0.0);
}

TEST_CASE("conditional RR eigenvalue") {
    // pure-loss channel leaves Eve's conditional state pure
    for (double t : {0.2, 0.5, 0.8})
        for (double v0 : {1.0, 7.0}) CHECK(near_abs(rr_conditional_nu2_asym(v0, t, 1.0), 1.0, 1e-12));
    CHECK(near_rel(rr_conditional_nu2_asym(1.0, 0.5, 2.0), 1.0760551736979407, 1e-12));
}

TEST_CASE("correlations between Eve and Bob's processed mode") {
    TwoWayParams p{1.0, 4.0, 0.5, 2.0};
    Eigen::Matrix<double, 8, 2> d = rr_conditional_correlations(p);
    const double xi1 = 0.3535533905932738, ph1 = 0.8660254037844386;
    const double xi2 = -1.75, ph2 = 1.2247448713915892;
    CHECK(near_abs(d(0, 0), xi1, 1e-12));
    CHECK(near_abs(d(1, 1), xi1, 1e-12));
    CHECK(near_abs(d(2, 0), ph1, 1e-12));
    CHECK(near_abs(d(3, 1), -ph1, 1e-12));
    CHECK(near_abs(d(4, 0), xi2, 1e-12));
    CHECK(near_abs(d(5, 1), xi2, 1e-12));
    CHECK(near_abs(d(6, 0), ph2, 1e-12));
    CHECK(near_abs(d(7, 1), -ph2, 1e-12));
    CHECK(d(0, 1) == 0.0);
    CHECK(d(2, 1) == 0.0);

    // matched noises decouple the first cloner pass, pure loss the entangled legs
    TwoWayParams m{2.0, 1.0, 0.5, 2.0};
    CHECK(near_abs(rr_conditional_correlations(m)(0, 0), 0.0, 1e-15));
    TwoWayParams pl{1.0, 4.0, 0.5, 1.0};
    CHECK(rr_conditional_correlations(pl)(2, 0) == 0.0);
    CHECK(rr_conditional_correlations(pl)(6, 0) == 0.0);
}

TEST_CASE("numeric rates converge to the asymptotic forms") {
    TwoWayParams rr{1.0, 1e6, 0.5, 1.0};
    RateBreakdown rb = rate_twoway_numeric(rr, Direction::rr);
    CHECK(rb.rate == rb.mutual_info - rb.holevo);
    CHECK(near_abs(rb.rate, rate_rr_twoway_asym(1.0, 0.5, 1.0), 1e-2));
    CHECK(near_rel(rb.rate, 0.6609619314817063, 1e-6));

    TwoWayParams dr{5.0, 1e6, 0.7, 1.5};
    RateBreakdown db = rate_twoway_numeric(dr, Direction::dr);
    CHECK(near_abs(db.rate, rate_dr_twoway_asym(5.0, 0.7, 1.5), 1e-2));
    CHECK(near_rel(db.rate, -0.45837410118563326, 1e-6));

    TwoWayParams rrw{1.0, 1e6, 0.5, 2.0};
    CHECK(near_rel(rate_twoway_numeric(rrw, Direction::rr).rate, -0.4218970546606968, 1e-6));
    TwoWayParams drv{10.0, 1e6, 0.5, 1.0};
    CHECK(near_rel(rate_twoway_numeric(drv, Direction::dr).rate, -0.5577374465484244, 1e-6));
}

TEST_CASE("numeric-to-asymptotic gap shrinks with modulation") {
    for (Direction d : {Direction::dr, Direction::rr}) {
        double asym = d == Direction::dr ? rate_dr_twoway_asym(1.0, 0.6, 1.2)
                                         : rate_rr_twoway_asym(1.0, 0.6, 1.2);
        double prev_gap = 1e300;
        for (double mu : {1e4, 1e5, 1e6}) {
            TwoWayParams p{1.0, mu, 0.6, 1.2};
            double gap = std::abs(rate_twoway_numeric(p, d).rate - asym);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        CHECK(prev_gap <= 1e-2);
    }
}

TEST_CASE("matched source and channel noise collapse the rates to reduced forms") {
    // the general expressions must agree with the algebraically reduced ones
    // whenever W = V0
    for (double t : {0.1, 0.3, 0.6, 0.9})
        for (double v : {1.0, 1.3135267622565914, 5.0, 40.0}) {
            double dr_reduced = 0.5 * std::log2(t * (1.0 + t) / (1.0 - t)) - h_function(v);
            CHECK(near_abs(rate_dr_twoway_asym(v, t, v), dr_reduced, 1e-12));

            double nu2_reduced = std::sqrt(
                (1.0 + t * t * v * v + t * t * t * (1.0 - v * v)) / (1.0 + t * t));
            double rr_reduced = 0.5 * std::log2((1.0 + t * t) / (1.0 - t)) +
                                h_function(nu2_reduced) - h_function(v);
            CHECK(near_abs(rate_rr_twoway_asym(v, t, v), rr_reduced, 1e-12));
            CHECK(near_abs(rr_conditional_nu2_asym(v, t, v), nu2_reduced, 1e-12));
        }
}

TEST_CASE("RR conditional tail product matches its asymptotic expression") {
    TwoWayParams p{1.0, 1e6, 0.5, 2.0};
    const double k = p.t * p.t * p.v0 + p.w + p.t * p.t * p.t * (p.w - p.v0);
    double expect = std::sqrt((1.0 - p.t) * (1.0 - p.t) * (1.0 - p.t) * k *
                              p.mu * p.mu * p.mu / p.t);
    // frozen conditional spectrum tail: 929.3211439368274 * 829158.5034588854
    CHECK(near_rel(929.3211439368274 * 829158.5034588854, expect, 1e-3));
    // and the leading conditioned eigenvalues approach nu2 and W
    CHECK(near_rel(1.0760550270690858, rr_conditional_nu2_asym(1.0, 0.5, 2.0), 1e-3));
}
