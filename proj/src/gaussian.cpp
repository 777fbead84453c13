#include "cvqkd/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvqkd {

namespace {

constexpr double kSymTol = 1e-9;        // max allowed |V - V^T| entry
constexpr double kClipBand = 1e-9;      // nu in [1 - band, 1) clips to 1
constexpr double kPairRelTol = 1e-6;    // +/- pair matching tolerance

}  // namespace

double h_function(double x) {
    if (x < 1.0 - kClipBand) {
        std::ostringstream os;
        os << "h_function domain: x = " << x << " < 1";
        throw std::domain_error(os.str());
    }
    if (x - 1.0 < 1e-12) {
        // (x-1)/2 * log2((x-1)/2) -> 0; only the (x+1)/2 term survives.
        if (x <= 1.0) return 0.0;
        const double a = (x + 1.0) / 2.0;
        return a * std::log2(a);
    }
    const double a = (x + 1.0) / 2.0;
    const double b = (x - 1.0) / 2.0;
    // a*log2(a) - b*log2(b) = (b*log1p(1/b) + ln(a)) / ln 2, stable for all
    // x > 1 including very large x where a and b nearly cancel.
    return (b * std::log1p(1.0 / b) + std::log(a)) / M_LN2;
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) {
    const auto rows = entries.rows();
    if (rows == 0 || rows != entries.cols() || rows % 2 != 0) {
        throw std::domain_error("CovarianceMatrix: entries must be square 2N x 2N");
    }
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymTol) {
        std::ostringstream os;
        os << "CovarianceMatrix: asymmetry " << asym << " exceeds 1e-9";
        throw std::domain_error(os.str());
    }
    m_ = 0.5 * (entries + entries.transpose());
}

CovarianceMatrix epr_cm(double w) {
    if (w < 1.0) throw std::domain_error("epr_cm: W must be >= 1");
    const double c = std::sqrt(w * w - 1.0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = w;
    m(0, 2) = m(2, 0) = c;
    m(1, 3) = m(3, 1) = -c;
    return CovarianceMatrix(std::move(m));
}

CovarianceMatrix thermal_cm(double v) {
    if (v < 1.0) throw std::domain_error("thermal_cm: V must be >= 1");
    return CovarianceMatrix(v * Eigen::MatrixXd::Identity(2, 2));
}

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cm) {
    const int n = cm.modes();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * cm.matrix(), false);
    if (solver.info() != Eigen::Success) {
        throw numeric_error("symplectic_eigenvalues: eigensolver did not converge");
    }
    std::vector<double> moduli(2 * n);
    for (int i = 0; i < 2 * n; ++i) moduli[i] = std::abs(solver.eigenvalues()[i]);
    std::sort(moduli.begin(), moduli.end(), std::greater<double>());

    SymplecticSpectrum spectrum;
    spectrum.values.reserve(n);
    for (int i = 0; i < 2 * n; i += 2) {
        // Eigenvalues of Omega V come in +/- i nu pairs; after sorting the
        // moduli, adjacent entries must agree.
        if (std::abs(moduli[i] - moduli[i + 1]) > kPairRelTol * std::max(moduli[i], 1.0)) {
            std::ostringstream os;
            os << "symplectic_eigenvalues: unpaired moduli " << moduli[i]
               << " and " << moduli[i + 1];
            throw numeric_error(os.str());
        }
        double nu = 0.5 * (moduli[i] + moduli[i + 1]);
        if (nu < 1.0 - kClipBand) {
            std::ostringstream os;
            os << "symplectic_eigenvalues: unphysical eigenvalue " << nu;
            throw physicality_error(os.str());
        }
        if (nu < 1.0) nu = 1.0;
        spectrum.values.push_back(nu);
    }
    std::sort(spectrum.values.begin(), spectrum.values.end());
    return spectrum;
}

double von_neumann_entropy(const CovarianceMatrix& cm) {
    double s = 0.0;
    for (double nu : symplectic_eigenvalues(cm).values) s += h_function(nu);
    return s;
}

CovarianceMatrix condition_on_homodyne(const CovarianceMatrix& joint,
                                       const std::vector<int>& kept_modes,
                                       int measured_mode,
                                       Quadrature quadrature) {
    const int n = joint.modes();
    if (measured_mode < 0 || measured_mode >= n) {
        throw std::domain_error("condition_on_homodyne: measured mode out of range");
    }
    std::vector<int> quad_idx;
    quad_idx.reserve(2 * kept_modes.size());
    for (int m : kept_modes) {
        if (m < 0 || m >= n || m == measured_mode) {
            throw std::domain_error("condition_on_homodyne: invalid kept mode");
        }
        quad_idx.push_back(2 * m);
        quad_idx.push_back(2 * m + 1);
    }
    const int mq = 2 * measured_mode + static_cast<int>(quadrature);
    const double v = joint(mq, mq);
    if (v <= 1e-12) {
        throw singularity_error("condition_on_homodyne: measured quadrature variance ~ 0");
    }
    const auto k = static_cast<Eigen::Index>(quad_idx.size());
    Eigen::MatrixXd a(k, k);
    Eigen::VectorXd c(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c(i) = joint(quad_idx[i], mq);
        for (Eigen::Index j = 0; j < k; ++j) a(i, j) = joint(quad_idx[i], quad_idx[j]);
    }
    // Pi B Pi has rank 1; its pseudo-inverse contributes 1/v in the measured
    // quadrature and nothing elsewhere, so the Schur complement is rank 1.
    CovarianceMatrix out(a - (c * c.transpose()) / v);
    symplectic_eigenvalues(out);  // physicality gate on the result
    return out;
}

}  // namespace cvqkd
