#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "perron/csr.hpp"
#include "perron/kernels.hpp"
#include "perron/network.hpp"

namespace perron {

using Vector = std::vector<double>;

/// Square real linear map with forward and transpose products.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual std::size_t dim() const = 0;
    /// out = M * in
    virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
    /// out = M^T * in
    virtual void apply_transpose(std::span<const double> in, std::span<double> out) const = 0;

    Vector apply(std::span<const double> in) const;
    Vector apply_transpose(std::span<const double> in) const;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

/**
 * Supra-adjacency operator of a multilayer or multiplex network.
 *
 * Multilayer blocks are flattened into one CSR matrix (plus its transpose).
 * For a multiplex only the block-diagonal layer matrices are stored and the
 * gamma coupling is applied on the fly, so B is never materialized.
 */
class SupraOperator final : public LinearOperator {
public:
    explicit SupraOperator(const Network& net, kernels::Exec exec = kernels::Exec::parallel);

    std::size_t dim() const override { return dim_; }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

    int nodes() const noexcept { return nodes_; }
    int layers() const noexcept { return layers_; }
    kernels::Exec exec() const noexcept { return exec_; }

private:
    std::size_t dim_;
    int nodes_;
    int layers_;
    double gamma_;
    kernels::Exec exec_;
    CsrMatrix forward_;
    CsrMatrix transpose_;
};

/// v -> B (B^T v) (hub) or v -> B^T (B v) (authority). Symmetric.
class GramOperator final : public LinearOperator {
public:
    enum class Kind { hub, authority };

    GramOperator(OperatorPtr base, Kind kind);

    std::size_t dim() const override { return base_->dim(); }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    OperatorPtr base_;
    Kind kind_;
};

OperatorPtr hub_operator(const Network& net);
OperatorPtr authority_operator(const Network& net);

/// scale * u v^T
class RankOneOperator final : public LinearOperator {
public:
    RankOneOperator(Vector u, Vector v, double scale = 1.0);

    std::size_t dim() const override { return u_.size(); }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    Vector u_;
    Vector v_;
    double scale_;
};

/// scale * blockdiag(u_1 v_1^T, ..., u_L v_L^T) with blocks of size n: the
/// projection of scale * u v^T onto block-diagonal matrices.
class BlockRankOneOperator final : public LinearOperator {
public:
    BlockRankOneOperator(int n, Vector u, Vector v, double scale = 1.0);

    std::size_t dim() const override { return u_.size(); }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    int n_;
    Vector u_;
    Vector v_;
    double scale_;
};

class CsrOperator final : public LinearOperator {
public:
    explicit CsrOperator(CsrMatrix m, kernels::Exec exec = kernels::Exec::parallel);

    std::size_t dim() const override { return static_cast<std::size_t>(forward_.rows()); }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

    const CsrMatrix& matrix() const noexcept { return forward_; }

private:
    CsrMatrix forward_;
    CsrMatrix transpose_;
    kernels::Exec exec_;
};

class DenseOperator final : public LinearOperator {
public:
    explicit DenseOperator(Eigen::MatrixXd m);

    std::size_t dim() const override { return static_cast<std::size_t>(m_.rows()); }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    Eigen::MatrixXd m_;
};

/// sum_t coef_t * op_t, all terms of equal dimension.
class SumOperator final : public LinearOperator {
public:
    struct Term {
        double coef;
        OperatorPtr op;
    };

    explicit SumOperator(std::vector<Term> terms);

    std::size_t dim() const override { return terms_.front().op->dim(); }
    void apply(std::span<const double> in, std::span<double> out) const override;
    void apply_transpose(std::span<const double> in, std::span<double> out) const override;
    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    std::vector<Term> terms_;
};

/// base + eps * perturbation
OperatorPtr perturbed(OperatorPtr base, double eps, OperatorPtr perturbation);

/// Dense matrix of any operator, by applying it to the standard basis.
/// Throws InfeasibleError above the cap.
Eigen::MatrixXd materialize(const LinearOperator& op, std::size_t cap = kDefaultDenseCap);

} // namespace perron
