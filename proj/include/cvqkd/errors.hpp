#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

// A covariance matrix (or a spectrum derived from one) violates the
// uncertainty principle: some symplectic eigenvalue is below 1 - 1e-9.
class physicality_error : public std::domain_error {
public:
    explicit physicality_error(const std::string& what) : std::domain_error(what) {}
};

// A measured quadrature carries (numerically) zero variance, so the
// homodyne Schur complement is undefined.
class singularity_error : public std::domain_error {
public:
    explicit singularity_error(const std::string& what) : std::domain_error(what) {}
};

// A root finder could not bracket a sign change within its search limits.
class bracket_error : public std::runtime_error {
public:
    explicit bracket_error(const std::string& what) : std::runtime_error(what) {}
};

// An eigensolver or other numeric kernel failed to converge.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvqkd
