#include "perron/operator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "perron/errors.hpp"

namespace perron {

Vector LinearOperator::apply(std::span<const double> in) const {
    Vector out(dim());
    apply(in, out);
    return out;
}

Vector LinearOperator::apply_transpose(std::span<const double> in) const {
    Vector out(dim());
    apply_transpose(in, out);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

CsrMatrix intra_block_diagonal(const MultiplexNetwork& net) {
    const int n = net.nodes();
    std::vector<CsrMatrix::Triplet> t;
    t.reserve(net.intra_entries());
    net.for_each_intra_entry([&](const EdgeKey& e, double w) {
        const auto p = supra_position(n, e);
        t.push_back({static_cast<int>(p.row), static_cast<int>(p.col), w});
    });
    const int dim = n * net.layers();
    return CsrMatrix::from_triplets(dim, dim, std::move(t));
}

} // namespace

SupraOperator::SupraOperator(const Network& net, kernels::Exec exec)
    : dim_(supra_dim(net)), nodes_(perron::nodes(net)), layers_(perron::layers(net)), gamma_(0.0),
      exec_(exec) {
    if (const auto* mx = std::get_if<MultiplexNetwork>(&net)) {
        gamma_ = mx->gamma();
        forward_ = intra_block_diagonal(*mx);
    } else {
        forward_ = supra_matrix(net);
    }
    transpose_ = forward_.transposed();
}

void SupraOperator::apply(std::span<const double> in, std::span<double> out) const {
    kernels::spmv(exec_, forward_, in, out);
    kernels::add_uniform_coupling(exec_, nodes_, layers_, gamma_, in, out);
}

void SupraOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
    // The coupling term is symmetric.
    kernels::spmv(exec_, transpose_, in, out);
    kernels::add_uniform_coupling(exec_, nodes_, layers_, gamma_, in, out);
}

// ---------------------------------------------------------------------------

GramOperator::GramOperator(OperatorPtr base, Kind kind) : base_(std::move(base)), kind_(kind) {}

void GramOperator::apply(std::span<const double> in, std::span<double> out) const {
    Vector tmp(base_->dim());
    if (kind_ == Kind::hub) {
        base_->apply_transpose(in, tmp);
        base_->apply(tmp, out);
    } else {
        base_->apply(in, tmp);
        base_->apply_transpose(tmp, out);
    }
}

void GramOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
    apply(in, out);
}

OperatorPtr hub_operator(const Network& net) {
    return std::make_shared<GramOperator>(std::make_shared<SupraOperator>(net),
                                          GramOperator::Kind::hub);
}

OperatorPtr authority_operator(const Network& net) {
    return std::make_shared<GramOperator>(std::make_shared<SupraOperator>(net),
                                          GramOperator::Kind::authority);
}

// ---------------------------------------------------------------------------

RankOneOperator::RankOneOperator(Vector u, Vector v, double scale)
    : u_(std::move(u)), v_(std::move(v)), scale_(scale) {
    if (u_.size() != v_.size()) {
        throw std::invalid_argument("rank-one factors must have equal length");
    }
}

void RankOneOperator::apply(std::span<const double> in, std::span<double> out) const {
    const double c = scale_ * kernels::dot(kernels::Exec::serial, v_, in);
    for (std::size_t a = 0; a < u_.size(); ++a) {
        out[a] = c * u_[a];
    }
}

void RankOneOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
    const double c = scale_ * kernels::dot(kernels::Exec::serial, u_, in);
    for (std::size_t a = 0; a < v_.size(); ++a) {
        out[a] = c * v_[a];
    }
}

// ---------------------------------------------------------------------------

BlockRankOneOperator::BlockRankOneOperator(int n, Vector u, Vector v, double scale)
    : n_(n), u_(std::move(u)), v_(std::move(v)), scale_(scale) {
    if (u_.size() != v_.size() || n <= 0 || u_.size() % static_cast<std::size_t>(n) != 0) {
        throw std::invalid_argument("block rank-one factors must split into blocks of size n");
    }
}

namespace {

void block_rank_one(int n, const Vector& left, const Vector& right, double scale,
                    std::span<const double> in, std::span<double> out) {
    const auto nn = static_cast<std::size_t>(n);
    for (std::size_t start = 0; start < left.size(); start += nn) {
        double c = 0.0;
        for (std::size_t a = start; a < start + nn; ++a) {
            c += right[a] * in[a];
        }
        c *= scale;
        for (std::size_t a = start; a < start + nn; ++a) {
            out[a] = c * left[a];
        }
    }
}

} // namespace

void BlockRankOneOperator::apply(std::span<const double> in, std::span<double> out) const {
    block_rank_one(n_, u_, v_, scale_, in, out);
}

void BlockRankOneOperator::apply_transpose(std::span<const double> in,
                                           std::span<double> out) const {
    block_rank_one(n_, v_, u_, scale_, in, out);
}

// ---------------------------------------------------------------------------

CsrOperator::CsrOperator(CsrMatrix m, kernels::Exec exec)
    : forward_(std::move(m)), transpose_(forward_.transposed()), exec_(exec) {
    if (forward_.rows() != forward_.cols()) {
        throw std::invalid_argument("operator matrix must be square");
    }
}

void CsrOperator::apply(std::span<const double> in, std::span<double> out) const {
    kernels::spmv(exec_, forward_, in, out);
}

void CsrOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
    kernels::spmv(exec_, transpose_, in, out);
}

// ---------------------------------------------------------------------------

DenseOperator::DenseOperator(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("operator matrix must be square");
    }
}

void DenseOperator::apply(std::span<const double> in, std::span<double> out) const {
    const Eigen::Map<const Eigen::VectorXd> v(in.data(), m_.cols());
    Eigen::Map<Eigen::VectorXd>(out.data(), m_.rows()).noalias() = m_ * v;
}

void DenseOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
    const Eigen::Map<const Eigen::VectorXd> v(in.data(), m_.rows());
    Eigen::Map<Eigen::VectorXd>(out.data(), m_.cols()).noalias() = m_.transpose() * v;
}

// ---------------------------------------------------------------------------

SumOperator::SumOperator(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw std::invalid_argument("sum of zero operators");
    }
    for (const auto& t : terms_) {
        if (t.op->dim() != terms_.front().op->dim()) {
            throw std::invalid_argument("operator dimensions differ");
        }
    }
}

void SumOperator::apply(std::span<const double> in, std::span<double> out) const {
    Vector tmp(dim());
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& t : terms_) {
        t.op->apply(in, tmp);
        kernels::axpy(kernels::Exec::serial, t.coef, tmp, out);
    }
}

void SumOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
    Vector tmp(dim());
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& t : terms_) {
        t.op->apply_transpose(in, tmp);
        kernels::axpy(kernels::Exec::serial, t.coef, tmp, out);
    }
}

OperatorPtr perturbed(OperatorPtr base, double eps, OperatorPtr perturbation) {
    return std::make_shared<SumOperator>(
        std::vector<SumOperator::Term>{{1.0, std::move(base)}, {eps, std::move(perturbation)}});
}

Eigen::MatrixXd materialize(const LinearOperator& op, std::size_t cap) {
    const auto n = op.dim();
    if (n > cap) {
        throw InfeasibleError("dense materialization of dimension " + std::to_string(n) +
                              " exceeds the cap of " + std::to_string(cap));
    }
    const auto d = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m(d, d);
    Vector e(n, 0.0);
    Vector col(n);
    for (std::size_t c = 0; c < n; ++c) {
        e[c] = 1.0;
        op.apply(e, col);
        e[c] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
        }
    }
    return m;
}

} // namespace perron
