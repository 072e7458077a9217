#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "perron/csr.hpp"
#include "perron/eigensolver.hpp"
#include "perron/network.hpp"
#include "perron/operator.hpp"

namespace perron {

/// Admissible perturbation classes. block_diagonal (the D cone) allows any
/// intra-layer entry; sparsity (the S cone) only existing intra-layer edges.
enum class Cone { block_diagonal, sparsity };

enum class Structure { unstructured, block_diagonal, sparsity, symmetric };

/**
 * Perron-root sensitivity matrix in factored form.
 *
 * Entry (i,k)->(j,l) of the unstructured matrix is kappa * y_a * x_b with
 * a = N(k-1)+i, b = N(l-1)+j. Structured variants zero everything outside
 * the cone. The symmetric variant holds kappa * (y_a x_b + y_b x_a). Nothing
 * of size (NL)^2 is stored; to_dense() materializes on request.
 */
class SensitivityMatrix {
public:
    static SensitivityMatrix unstructured(const PerronTriple& t, int nodes, int layers);
    static SensitivityMatrix structured(const PerronTriple& t, const Network& net, Cone cone);
    static SensitivityMatrix symmetric(const PerronTriple& t, const Network& net);

    Structure structure() const noexcept { return structure_; }
    int nodes() const noexcept { return nodes_; }
    int layers() const noexcept { return layers_; }
    double kappa() const noexcept { return kappa_; }

    /// 0 outside the structure.
    double entry(const EdgeKey& e) const;
    /// Equals the matching condition number: kappa, kappa_D or kappa_S.
    double frobenius_norm() const;
    /// 1^T S 1
    double total() const;

    Eigen::MatrixXd to_dense(std::size_t cap = kDefaultDenseCap) const;

private:
    SensitivityMatrix() = default;

    double product(std::size_t a, std::size_t b) const { return y_[a] * x_[b]; }

    Structure structure_ = Structure::unstructured;
    int nodes_ = 0;
    int layers_ = 0;
    double kappa_ = 1.0;
    Vector y_;
    Vector x_;
    std::vector<CsrMatrix> pattern_;  // sparsity variant only, one per layer
};

/// Wilkinson perturbation W = y x^T (unit Frobenius and spectral norm).
OperatorPtr wilkinson(const PerronTriple& t);

/// All-ones matrix scaled to unit Frobenius norm.
OperatorPtr normalized_all_ones(std::size_t dim);

/// First-order root shift eps * y^T E x / (y^T x); no second-order term.
double first_order_delta_rho(const PerronTriple& t, const LinearOperator& e, double eps);
double first_order_delta_rho(const PerronTriple& t, const Eigen::MatrixXd& e, double eps);

/// kappa * y_{N(k-1)+i} * x_{N(l-1)+j}
double sensitivity_entry(const PerronTriple& t, int nodes, const EdgeKey& e);

SensitivityMatrix sensitivity_matrix(const PerronTriple& t, int nodes, int layers);
/// D-structured: the L diagonal blocks kappa * Y_l X_l^T.
SensitivityMatrix sensitivity_matrix_multiplex(const PerronTriple& t, const MultiplexNetwork& net);
/// S-structured: the D-structured matrix masked to existing intra-layer edges.
SensitivityMatrix structured_sensitivity_matrix(const PerronTriple& t, const MultiplexNetwork& net);

/// kappa * ||(y x^T)|_cone||_F. For a multilayer network the cone uses its
/// diagonal blocks.
double structured_condition_number(const PerronTriple& t, Cone cone, const Network& net);

/// (y x^T)|_cone / ||(y x^T)|_cone||_F. Throws NumericalError when the
/// projection vanishes.
OperatorPtr structured_wilkinson(const PerronTriple& t, Cone cone, const Network& net);

/// 2 x_a x_b for undirected networks (x = y). Throws InputError if directed.
double symmetric_sensitivity_entry(const PerronTriple& t, const Network& net, const EdgeKey& e);

/// -(1/rho) B o S over every nonzero of the supra matrix (coupling included).
CsrMatrix spectral_impact(const Network& net, const PerronTriple& t);
/// Layer-level form for a multiplex: -(1/rho) A_l o S_l, coupling excluded.
std::vector<CsrMatrix> spectral_impact_layers(const MultiplexNetwork& net, const PerronTriple& t);

} // namespace perron
