#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "perron/network.hpp"
#include "perron/operator.hpp"

namespace perron {

/// Perron root with unit-norm, positive right (x) and left (y) vectors.
struct PerronTriple {
    double rho = 0.0;
    Vector x;
    Vector y;
    double kappa = 1.0;  // 1 / (y^T x)
    double residual_right = 0.0;  // ||B x - rho x||
    double residual_left = 0.0;   // ||B^T y - rho y||
    int iterations = 0;
};

struct SolverOptions {
    double tol = 1e-10;
    int max_iter = 100000;
    /// The iteration runs on B + s I with s = shift_fraction * (row/column sum
    /// bound on rho). The shift makes the Perron root strictly dominant for
    /// periodic matrices and leaves the eigenvectors unchanged.
    double shift_fraction = 0.1;
};

/**
 * Two-sided power iteration for the Perron triple of a nonnegative
 * irreducible operator.
 *
 * Both sides start from 1/sqrt(n). The root estimate is the two-sided
 * Rayleigh quotient y^T B x / y^T x. Convergence requires both residuals
 * and the change of the root estimate to fall below tol * max(1, rho).
 * Throws NumericalError on non-convergence (message carries residuals) or
 * when the limit vectors are not positive.
 */
PerronTriple perron(const LinearOperator& op, const SolverOptions& options = {});
PerronTriple perron(const Network& net, const SolverOptions& options = {});

/// 1 / (y^T x).
double condition_number(const PerronTriple& t);

/// Full dense nonsymmetric eigensolve of m and m^T. Independent of perron().
/// Throws InfeasibleError above the cap and NumericalError when the
/// eigenvalue of largest real part is complex or not of maximal modulus.
PerronTriple perron_dense_oracle(const Eigen::MatrixXd& m, std::size_t cap = kDefaultDenseCap);

} // namespace perron
