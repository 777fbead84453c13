#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvqkd/errors.hpp"

namespace cvqkd {

// Quadrature selector for homodyne detection. Ordering convention is
// (q1, p1, q2, p2, ...) throughout; q is index 0 within a mode.
enum class Quadrature { q = 0, p = 1 };

// Second-moment matrix of an N-mode Gaussian state in shot-noise units
// (vacuum variance = 1). Entries are validated symmetric within 1e-9 and
// stored exactly symmetrized. Physicality (nu_k >= 1 - 1e-9) is checked by
// symplectic_eigenvalues, not at construction.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Eigen::MatrixXd entries);

    int modes() const { return static_cast<int>(m_.rows()) / 2; }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Eigen::MatrixXd m_;
};

// Sorted (ascending) symplectic eigenvalues nu_1..nu_N of a CM. Values in
// [1 - 1e-9, 1) are clipped to 1; the product of the values equals
// sqrt(det V) for the source matrix.
struct SymplecticSpectrum {
    std::vector<double> values;
};

// Thermal-state entropy of a symplectic eigenvalue x >= 1, in bits:
// ((x+1)/2)log2((x+1)/2) - ((x-1)/2)log2((x-1)/2). Exactly 0 at x = 1.
// Throws std::domain_error for x < 1 - 1e-9.
double h_function(double x);

// 2-mode EPR (two-mode squeezed vacuum) CM of variance W >= 1:
// [[W I, sqrt(W^2-1) Z], [sqrt(W^2-1) Z, W I]].
CovarianceMatrix epr_cm(double w);

// Single-mode thermal CM V * I, V >= 1.
CovarianceMatrix thermal_cm(double v);

// Symplectic form Omega = direct sum of [[0,1],[-1,0]] over n modes.
Eigen::MatrixXd symplectic_form(int n_modes);

// Moduli of the eigenvalues of Omega * V, deduplicated from +/- pairs into
// N values. Throws physicality_error if any value < 1 - 1e-9 and
// numeric_error if the eigensolver fails or pairs cannot be matched within
// relative tolerance 1e-6.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cm);

// Von Neumann entropy sum_k h(nu_k) in bits; 0 exactly on pure states.
double von_neumann_entropy(const CovarianceMatrix& cm);

// Conditional CM of kept_modes after an ideal homodyne measurement of one
// quadrature of measured_mode: A - c c^T / v, the Schur complement through
// the Moore-Penrose pseudo-inverse of Pi B Pi (rank 1). Throws
// singularity_error if the measured-quadrature variance is <= 1e-12 and
// physicality_error if the resulting spectrum is unphysical.
CovarianceMatrix condition_on_homodyne(const CovarianceMatrix& joint,
                                       const std::vector<int>& kept_modes,
                                       int measured_mode,
                                       Quadrature quadrature);

}  // namespace cvqkd
