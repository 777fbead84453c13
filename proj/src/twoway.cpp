#include "cvqkd/twoway.hpp"

#include <cmath>

namespace cvqkd {

void TwoWayParams::validate() const {
    if (v0 < 1.0) throw std::domain_error("TwoWayParams: v0 must be >= 1");
    if (mu <= 0.0) throw std::domain_error("TwoWayParams: mu must be > 0");
    if (t <= 0.0 || t >= 1.0) throw std::domain_error("TwoWayParams: t must be in (0, 1)");
    if (w < 1.0) throw std::domain_error("TwoWayParams: w must be >= 1");
}

EveCM4Params eve_cm_twoway_params(const TwoWayParams& p) {
    p.validate();
    const double vb1 = p.v0 + p.mu;
    const double root = std::sqrt(p.w * p.w - 1.0);
    EveCM4Params c;
    c.epsilon = (1.0 - p.t) * vb1 + p.t * p.w;
    c.chi = -std::sqrt(p.t) * (1.0 - p.t) * (p.w - vb1);
    c.theta = -(1.0 - p.t) * root;
    c.gamma = p.t * (1.0 - p.t) * vb1 + (1.0 - p.t + p.t * p.t) * p.w;
    c.phi = std::sqrt(p.t) * root;
    return c;
}

CovarianceMatrix eve_cm_twoway(const TwoWayParams& p, double delta_x, double delta_y) {
    const EveCM4Params c = eve_cm_twoway_params(p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
    auto set_block = [&m](int mode_a, int mode_b, double v, bool z) {
        // writes v * I, or v * Z with Z = diag(1, -1), into the 2x2 block
        m(2 * mode_a, 2 * mode_b) = m(2 * mode_b, 2 * mode_a) = v;
        m(2 * mode_a + 1, 2 * mode_b + 1) = m(2 * mode_b + 1, 2 * mode_a + 1) = z ? -v : v;
    };
    set_block(0, 0, c.epsilon, false);
    set_block(1, 1, p.w, false);
    set_block(3, 3, p.w, false);
    set_block(0, 1, c.phi, true);
    set_block(0, 2, c.chi, false);
    set_block(1, 2, c.theta, true);
    set_block(2, 3, c.phi, true);
    m(4, 4) = c.gamma + (1.0 - p.t) * delta_x;
    m(5, 5) = c.gamma + (1.0 - p.t) * delta_y;
    CovarianceMatrix out(std::move(m));
    symplectic_eigenvalues(out);  // physicality gate
    return out;
}

double bob_output_variance(const TwoWayParams& p) {
    if (p.v0 < 1.0 || p.w < 1.0 || p.t <= 0.0 || p.t >= 1.0 || p.mu < 0.0) {
        throw std::domain_error("bob_output_variance: invalid params");
    }
    return p.t * p.t * p.v0 + p.t * p.mu + (1.0 - p.t * p.t) * p.w;
}

double mutual_info_twoway(const TwoWayParams& p) {
    p.validate();
    TwoWayParams cond = p;
    cond.mu = 0.0;
    return 0.5 * std::log2(bob_output_variance(p) / bob_output_variance(cond));
}

double rate_dr_twoway_asym(double v0, double t, double w) {
    TwoWayParams{v0, 1.0, t, w}.validate();
    const double vba = t * t * v0 + (1.0 - t * t) * w;
    return 0.5 * std::log2(t * (1.0 + t) * w / ((1.0 - t) * vba)) - h_function(w);
}

double rr_conditional_nu2_asym(double v0, double t, double w) {
    const double k = t * t * v0 + w + t * t * t * (w - v0);
    return std::sqrt(w * (1.0 + t * t * v0 * w + t * t * t * (1.0 - v0 * w)) / k);
}

double rate_rr_twoway_asym(double v0, double t, double w) {
    TwoWayParams{v0, 1.0, t, w}.validate();
    const double k = t * t * v0 + w + t * t * t * (w - v0);
    const double vba = v0 * t * t + (1.0 - t * t) * w;
    return 0.5 * std::log2(k / (vba * (1.0 - t)))
           + h_function(rr_conditional_nu2_asym(v0, t, w)) - h_function(w);
}

Eigen::Matrix<double, 8, 2> rr_conditional_correlations(const TwoWayParams& p) {
    p.validate();
    const double root = std::sqrt(p.w * p.w - 1.0);
    const double st1t = std::sqrt(p.t * (1.0 - p.t));
    const double xi1 = -p.t * std::sqrt(1.0 - p.t) * (p.v0 - p.w);
    const double phi1 = st1t * root;
    const double xi2 = st1t * (p.t * p.w - p.t * p.v0 - p.mu);
    const double phi2 = std::sqrt(1.0 - p.t) * root;
    Eigen::Matrix<double, 8, 2> d = Eigen::Matrix<double, 8, 2>::Zero();
    d(0, 0) = xi1;
    d(1, 1) = xi1;
    d(2, 0) = phi1;
    d(3, 1) = -phi1;
    d(4, 0) = xi2;
    d(5, 1) = xi2;
    d(6, 0) = phi2;
    d(7, 1) = -phi2;
    return d;
}

RateBreakdown rate_twoway_numeric(const TwoWayParams& p, Direction direction) {
    p.validate();
    const double s_e = von_neumann_entropy(eve_cm_twoway(p, p.mu, p.mu));
    double s_cond;
    if (direction == Direction::dr) {
        s_cond = von_neumann_entropy(eve_cm_twoway(p, 0.0, p.mu));
    } else {
        Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(10, 10);
        joint.topLeftCorner<8, 8>() = eve_cm_twoway(p, p.mu, p.mu).matrix();
        const Eigen::Matrix<double, 8, 2> d = rr_conditional_correlations(p);
        joint.block<8, 2>(0, 8) = d;
        joint.block<2, 8>(8, 0) = d.transpose();
        const double vb = bob_output_variance(p);
        joint(8, 8) = joint(9, 9) = vb;
        s_cond = von_neumann_entropy(condition_on_homodyne(
            CovarianceMatrix(std::move(joint)), {0, 1, 2, 3}, 4, Quadrature::q));
    }
    RateBreakdown out;
    out.direction = direction;
    out.mutual_info = mutual_info_twoway(p);
    out.holevo = s_e - s_cond;
    out.rate = out.mutual_info - out.holevo;
    return out;
}

}  // namespace cvqkd
