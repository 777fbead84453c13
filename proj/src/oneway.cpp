#include "cvqkd/oneway.hpp"

#include <cmath>
#include <sstream>

namespace cvqkd {

namespace {

void check_range(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace

void OneWayParams::validate() const {
    check_range(v0 >= 1.0, "OneWayParams: v0 must be >= 1");
    check_range(va > 0.0, "OneWayParams: va must be > 0");
    check_range(t > 0.0 && t < 1.0, "OneWayParams: t must be in (0, 1)");
    check_range(w >= 1.0, "OneWayParams: w must be >= 1");
}

double lambda_fn(double x, double y, double t) {
    check_range(t >= 0.0 && t <= 1.0, "lambda_fn: t must be in [0, 1]");
    return t * x + (1.0 - t) * y;
}

CovarianceMatrix eve_cm_oneway(const OneWayParams& p) {
    p.validate();
    const double od = std::sqrt(p.t * (p.w * p.w - 1.0));
    const double lower = p.t * p.w + (1.0 - p.t) * (p.va + p.v0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m(0, 0) = m(1, 1) = p.w;
    m(2, 2) = m(3, 3) = lower;
    m(0, 2) = m(2, 0) = od;
    m(1, 3) = m(3, 1) = -od;
    return CovarianceMatrix(std::move(m));
}

double mutual_info_oneway(const OneWayParams& p) {
    p.validate();
    return 0.5 * std::log2(1.0 + p.t * p.va / lambda_fn(p.v0, p.w, p.t));
}

double rate_dr_oneway_asym(double v0, double t, double w) {
    OneWayParams{v0, 1.0, t, w}.validate();
    const double nu1 = std::sqrt(w * lambda_fn(1.0, w * v0, t) / lambda_fn(w, v0, t));
    return 0.5 * std::log2(t * lambda_fn(w, v0, t) / ((1.0 - t) * lambda_fn(v0, w, t)))
           + h_function(nu1) - h_function(w);
}

double rate_rr_oneway_asym(double v0, double t, double w) {
    OneWayParams{v0, 1.0, t, w}.validate();
    return 0.5 * std::log2(w / ((1.0 - t) * lambda_fn(v0, w, t))) - h_function(w);
}

RateBreakdown rate_oneway_numeric(const OneWayParams& p, Direction direction) {
    p.validate();
    const double s_e = von_neumann_entropy(eve_cm_oneway(p));
    double s_cond;
    if (direction == Direction::dr) {
        // Conditioning on Alice's encoding removes Va from the measured (q)
        // quadrature of Eve's second mode only.
        Eigen::MatrixXd m = eve_cm_oneway(p).matrix();
        m(2, 2) = p.t * p.w + (1.0 - p.t) * p.v0;
        s_cond = von_neumann_entropy(CovarianceMatrix(std::move(m)));
    } else {
        // Joint CM of (E', E'', B); Bob homodynes q of his mode.
        const double b = lambda_fn(p.v0, p.w, p.t) + p.t * p.va;
        const double c_top = std::sqrt((1.0 - p.t) * (p.w * p.w - 1.0));
        const double c_bot = std::sqrt(p.t * (1.0 - p.t)) * (p.w - (p.va + p.v0));
        Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(6, 6);
        joint.topLeftCorner<4, 4>() = eve_cm_oneway(p).matrix();
        joint(4, 4) = joint(5, 5) = b;
        joint(0, 4) = joint(4, 0) = c_top;
        joint(1, 5) = joint(5, 1) = -c_top;
        joint(2, 4) = joint(4, 2) = c_bot;
        joint(3, 5) = joint(5, 3) = c_bot;
        s_cond = von_neumann_entropy(
            condition_on_homodyne(CovarianceMatrix(std::move(joint)), {0, 1}, 2, Quadrature::q));
    }
    RateBreakdown out;
    out.direction = direction;
    out.mutual_info = mutual_info_oneway(p);
    out.holevo = s_e - s_cond;
    out.rate = out.mutual_info - out.holevo;
    return out;
}

double excess_noise_from_w(double w, double t) {
    check_range(w >= 1.0, "excess_noise_from_w: w must be >= 1");
    check_range(t > 0.0 && t < 1.0, "excess_noise_from_w: t must be in (0, 1)");
    return (w - 1.0) * (1.0 - t) / t;
}

double w_from_excess_noise(double n, double t) {
    check_range(n >= 0.0, "w_from_excess_noise: n must be >= 0");
    check_range(t > 0.0 && t < 1.0, "w_from_excess_noise: t must be in (0, 1)");
    return 1.0 + n * t / (1.0 - t);
}

}  // namespace cvqkd
