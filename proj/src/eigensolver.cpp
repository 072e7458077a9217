#include "perron/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "perron/errors.hpp"
#include "perron/kernels.hpp"

namespace perron {

namespace {

using kernels::Exec;

double residual(std::span<const double> image, double rho, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) {
        const double r = image[a] - rho * v[a];
        acc += r * r;
    }
    return std::sqrt(acc);
}

// Flips v so its largest-magnitude entry is positive, clamps round-off
// negatives and renormalizes.
void fix_sign(Vector& v, const char* side) {
    const auto big = std::max_element(v.begin(), v.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*big < 0.0) {
        for (double& e : v) {
            e = -e;
        }
    }
    for (double& e : v) {
        if (e < -1e-12) {
            throw NumericalError(std::string("Perron vector (") + side +
                                 ") has a negative entry; operator may be reducible");
        }
        e = std::max(e, 0.0);
    }
    const double nrm = kernels::norm2(Exec::serial, v);
    for (double& e : v) {
        e /= nrm;
    }
    if (*std::min_element(v.begin(), v.end()) <= 0.0) {
        throw NumericalError(std::string("Perron vector (") + side +
                             ") has a zero entry; operator may be reducible");
    }
}

void finish(const LinearOperator& op, PerronTriple& t) {
    fix_sign(t.x, "right");
    fix_sign(t.y, "left");
    const Vector bx = op.apply(t.x);
    const Vector by = op.apply_transpose(t.y);
    const double yx = kernels::dot(Exec::serial, t.y, t.x);
    t.rho = kernels::dot(Exec::serial, t.y, bx) / yx;
    t.kappa = 1.0 / yx;
    t.residual_right = residual(bx, t.rho, t.x);
    t.residual_left = residual(by, t.rho, t.y);
}

} // namespace

PerronTriple perron(const LinearOperator& op, const SolverOptions& options) {
    if (!(options.tol > 0.0)) {
        throw InputError("solver tolerance must be positive");
    }
    const auto n = op.dim();
    if (n == 0) {
        throw InputError("empty operator");
    }
    const auto exec = Exec::parallel;

    Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vector y = x;
    Vector bx(n);
    Vector by(n);

    // Row and column sums bound rho; the shift is a fraction of the tighter one.
    const Vector ones(n, 1.0);
    op.apply(ones, bx);
    op.apply_transpose(ones, by);
    const double bound = std::min(*std::max_element(bx.begin(), bx.end()),
                                  *std::max_element(by.begin(), by.end()));
    if (!(bound > 0.0)) {
        throw NumericalError("operator has a zero row or column sum bound; no Perron root");
    }
    const double shift = options.shift_fraction * bound;

    double rho_prev = std::numeric_limits<double>::quiet_NaN();
    double rx = 0.0;
    double ry = 0.0;
    double rho = 0.0;
    for (int it = 1; it <= options.max_iter; ++it) {
        op.apply(x, bx);
        op.apply_transpose(y, by);
        const double yx = kernels::dot(exec, y, x);
        rho = kernels::dot(exec, y, bx) / yx;
        rx = residual(bx, rho, x);
        ry = residual(by, rho, y);
        const double threshold = options.tol * std::max(1.0, std::abs(rho));
        if (rx <= threshold && ry <= threshold && std::abs(rho - rho_prev) <= threshold) {
            PerronTriple t;
            t.x = std::move(x);
            t.y = std::move(y);
            t.iterations = it;
            finish(op, t);
            return t;
        }
        rho_prev = rho;
        kernels::axpy(exec, shift, x, bx);
        kernels::axpy(exec, shift, y, by);
        kernels::scale(exec, 1.0 / kernels::norm2(exec, bx), bx);
        kernels::scale(exec, 1.0 / kernels::norm2(exec, by), by);
        std::swap(x, bx);
        std::swap(y, by);
    }
    char msg[200];
    std::snprintf(msg, sizeof msg,
                  "power iteration did not converge in %d iterations "
                  "(rho=%.10g, right residual=%.3e, left residual=%.3e)",
                  options.max_iter, rho, rx, ry);
    throw NumericalError(msg);
}

PerronTriple perron(const Network& net, const SolverOptions& options) {
    return perron(SupraOperator(net), options);
}

double condition_number(const PerronTriple& t) {
    return 1.0 / kernels::dot(Exec::serial, t.y, t.x);
}

namespace {

struct DominantPair {
    double value;
    Vector vector;
};

DominantPair dominant_eigenpair(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
    if (es.info() != Eigen::Success) {
        throw NumericalError("dense eigensolver failed");
    }
    const auto& values = es.eigenvalues();
    Eigen::Index best = 0;
    double max_modulus = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i].real() > values[best].real()) {
            best = i;
        }
        max_modulus = std::max(max_modulus, std::abs(values[i]));
    }
    const auto lambda = values[best];
    const double scale = std::max(1.0, std::abs(lambda));
    if (std::abs(lambda.imag()) > 1e-10 * scale || lambda.real() < max_modulus - 1e-8 * scale) {
        throw NumericalError("dominant eigenvalue is not a real Perron root");
    }
    const Eigen::VectorXd v = es.eigenvectors().col(best).real();
    return {lambda.real(), Vector(v.data(), v.data() + v.size())};
}

} // namespace

PerronTriple perron_dense_oracle(const Eigen::MatrixXd& m, std::size_t cap) {
    if (static_cast<std::size_t>(m.rows()) > cap) {
        throw InfeasibleError("dense eigensolve of dimension " + std::to_string(m.rows()) +
                              " exceeds the cap of " + std::to_string(cap));
    }
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InputError("dense oracle needs a nonempty square matrix");
    }
    auto right = dominant_eigenpair(m);
    auto left = dominant_eigenpair(m.transpose());
    PerronTriple t;
    t.x = std::move(right.vector);
    t.y = std::move(left.vector);
    finish(DenseOperator(m), t);
    t.rho = right.value;
    return t;
}

} // namespace perron
