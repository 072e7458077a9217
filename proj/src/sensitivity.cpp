#include "perron/sensitivity.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "perron/errors.hpp"
#include "perron/kernels.hpp"

namespace perron {

namespace {

using kernels::Exec;

double sum_range(const Vector& v, std::size_t first, std::size_t count) {
    return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(first),
                           v.begin() + static_cast<std::ptrdiff_t>(first + count), 0.0);
}

double sq_norm_range(const Vector& v, std::size_t first, std::size_t count) {
    double acc = 0.0;
    for (std::size_t a = first; a < first + count; ++a) {
        acc += v[a] * v[a];
    }
    return acc;
}

std::vector<CsrMatrix> diagonal_blocks(const Network& net) {
    std::vector<CsrMatrix> out;
    const int n = nodes(net);
    if (const auto* mx = std::get_if<MultiplexNetwork>(&net)) {
        for (int l = 1; l <= mx->layers(); ++l) {
            out.push_back(mx->layer(l));
        }
    } else {
        const auto& ml = std::get<MultilayerNetwork>(net);
        for (int l = 1; l <= ml.layers(); ++l) {
            const auto* b = ml.block(l, l);
            out.push_back(b ? *b : CsrMatrix(n, n));
        }
    }
    return out;
}

// ||(y x^T)|_cone||_F^2
double projected_sq_norm(const PerronTriple& t, Cone cone, const Network& net) {
    const auto n = static_cast<std::size_t>(nodes(net));
    const int nl = layers(net);
    double acc = 0.0;
    if (cone == Cone::block_diagonal) {
        for (int l = 0; l < nl; ++l) {
            const auto first = n * static_cast<std::size_t>(l);
            acc += sq_norm_range(t.y, first, n) * sq_norm_range(t.x, first, n);
        }
        return acc;
    }
    const auto blocks = diagonal_blocks(net);
    for (int l = 0; l < nl; ++l) {
        const auto first = n * static_cast<std::size_t>(l);
        blocks[l].for_each([&](int r, int c, double) {
            const double p = t.y[first + r] * t.x[first + c];
            acc += p * p;
        });
    }
    return acc;
}

} // namespace

// ---------------------------------------------------------------------------

SensitivityMatrix SensitivityMatrix::unstructured(const PerronTriple& t, int nodes, int layers) {
    SensitivityMatrix s;
    s.structure_ = Structure::unstructured;
    s.nodes_ = nodes;
    s.layers_ = layers;
    s.kappa_ = t.kappa;
    s.y_ = t.y;
    s.x_ = t.x;
    if (s.y_.size() != static_cast<std::size_t>(nodes) * static_cast<std::size_t>(layers)) {
        throw InputError("Perron vectors do not have length N*L");
    }
    return s;
}

SensitivityMatrix SensitivityMatrix::structured(const PerronTriple& t, const Network& net,
                                                Cone cone) {
    auto s = unstructured(t, perron::nodes(net), perron::layers(net));
    if (cone == Cone::block_diagonal) {
        s.structure_ = Structure::block_diagonal;
    } else {
        s.structure_ = Structure::sparsity;
        s.pattern_ = diagonal_blocks(net);
    }
    return s;
}

SensitivityMatrix SensitivityMatrix::symmetric(const PerronTriple& t, const Network& net) {
    if (directed(net)) {
        throw InputError("symmetric sensitivity needs an undirected network");
    }
    auto s = unstructured(t, perron::nodes(net), perron::layers(net));
    s.structure_ = Structure::symmetric;
    return s;
}

double SensitivityMatrix::entry(const EdgeKey& e) const {
    if (e.i < 1 || e.i > nodes_ || e.j < 1 || e.j > nodes_ || e.k < 1 || e.k > layers_ ||
        e.l < 1 || e.l > layers_) {
        throw InputError("sensitivity index out of range");
    }
    const auto [a, b] = supra_position(nodes_, e);
    switch (structure_) {
    case Structure::unstructured:
        return kappa_ * product(a, b);
    case Structure::block_diagonal:
        return e.k == e.l ? kappa_ * product(a, b) : 0.0;
    case Structure::sparsity:
        return e.k == e.l && pattern_[static_cast<std::size_t>(e.k - 1)].contains(e.i - 1, e.j - 1)
                   ? kappa_ * product(a, b)
                   : 0.0;
    case Structure::symmetric:
        return kappa_ * (product(a, b) + product(b, a));
    }
    return 0.0;
}

double SensitivityMatrix::frobenius_norm() const {
    const auto n = static_cast<std::size_t>(nodes_);
    switch (structure_) {
    case Structure::unstructured:
        return kappa_ * kernels::norm2(Exec::serial, y_) * kernels::norm2(Exec::serial, x_);
    case Structure::block_diagonal: {
        double acc = 0.0;
        for (int l = 0; l < layers_; ++l) {
            const auto first = n * static_cast<std::size_t>(l);
            acc += sq_norm_range(y_, first, n) * sq_norm_range(x_, first, n);
        }
        return kappa_ * std::sqrt(acc);
    }
    case Structure::sparsity: {
        double acc = 0.0;
        for (int l = 0; l < layers_; ++l) {
            const auto first = n * static_cast<std::size_t>(l);
            pattern_[l].for_each([&](int r, int c, double) {
                const double p = product(first + r, first + c);
                acc += p * p;
            });
        }
        return kappa_ * std::sqrt(acc);
    }
    case Structure::symmetric: {
        // sum (y_a x_b + y_b x_a)^2 = 2 |y|^2 |x|^2 + 2 (y.x)^2
        const double yy = kernels::dot(Exec::serial, y_, y_);
        const double xx = kernels::dot(Exec::serial, x_, x_);
        const double yx = kernels::dot(Exec::serial, y_, x_);
        return kappa_ * std::sqrt(2.0 * yy * xx + 2.0 * yx * yx);
    }
    }
    return 0.0;
}

double SensitivityMatrix::total() const {
    const auto n = static_cast<std::size_t>(nodes_);
    const double sy = std::accumulate(y_.begin(), y_.end(), 0.0);
    const double sx = std::accumulate(x_.begin(), x_.end(), 0.0);
    switch (structure_) {
    case Structure::unstructured:
        return kappa_ * sy * sx;
    case Structure::symmetric:
        return 2.0 * kappa_ * sy * sx;
    case Structure::block_diagonal: {
        double acc = 0.0;
        for (int l = 0; l < layers_; ++l) {
            const auto first = n * static_cast<std::size_t>(l);
            acc += sum_range(y_, first, n) * sum_range(x_, first, n);
        }
        return kappa_ * acc;
    }
    case Structure::sparsity: {
        double acc = 0.0;
        for (int l = 0; l < layers_; ++l) {
            const auto first = n * static_cast<std::size_t>(l);
            pattern_[l].for_each([&](int r, int c, double) { acc += product(first + r, first + c); });
        }
        return kappa_ * acc;
    }
    }
    return 0.0;
}

Eigen::MatrixXd SensitivityMatrix::to_dense(std::size_t cap) const {
    const auto dim = y_.size();
    if (dim > cap) {
        throw InfeasibleError("dense sensitivity matrix of dimension " + std::to_string(dim) +
                              " exceeds the cap of " + std::to_string(cap));
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd m(d, d);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                entry(edge_at(nodes_, a, b));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------

OperatorPtr wilkinson(const PerronTriple& t) { return std::make_shared<RankOneOperator>(t.y, t.x); }

OperatorPtr normalized_all_ones(std::size_t dim) {
    const Vector ones(dim, 1.0);
    return std::make_shared<RankOneOperator>(ones, ones, 1.0 / static_cast<double>(dim));
}

double first_order_delta_rho(const PerronTriple& t, const LinearOperator& e, double eps) {
    const Vector ex = e.apply(t.x);
    return eps * kernels::dot(Exec::serial, t.y, ex) / kernels::dot(Exec::serial, t.y, t.x);
}

double first_order_delta_rho(const PerronTriple& t, const Eigen::MatrixXd& e, double eps) {
    return first_order_delta_rho(t, DenseOperator(e), eps);
}

double sensitivity_entry(const PerronTriple& t, int nodes, const EdgeKey& e) {
    const auto [a, b] = supra_position(nodes, e);
    if (a >= t.y.size() || b >= t.x.size() || e.i < 1 || e.j < 1 || e.k < 1 || e.l < 1 ||
        e.i > nodes || e.j > nodes) {
        throw InputError("sensitivity index out of range");
    }
    return t.kappa * (t.y[a] * t.x[b]);
}

SensitivityMatrix sensitivity_matrix(const PerronTriple& t, int nodes, int layers) {
    return SensitivityMatrix::unstructured(t, nodes, layers);
}

SensitivityMatrix sensitivity_matrix_multiplex(const PerronTriple& t, const MultiplexNetwork& net) {
    return SensitivityMatrix::structured(t, Network{net}, Cone::block_diagonal);
}

SensitivityMatrix structured_sensitivity_matrix(const PerronTriple& t,
                                                const MultiplexNetwork& net) {
    return SensitivityMatrix::structured(t, Network{net}, Cone::sparsity);
}

double structured_condition_number(const PerronTriple& t, Cone cone, const Network& net) {
    return t.kappa * std::sqrt(projected_sq_norm(t, cone, net));
}

OperatorPtr structured_wilkinson(const PerronTriple& t, Cone cone, const Network& net) {
    const double norm = std::sqrt(projected_sq_norm(t, cone, net));
    if (!(norm > 0.0)) {
        throw NumericalError("structured Wilkinson perturbation vanishes on this cone");
    }
    const int n = nodes(net);
    if (cone == Cone::block_diagonal) {
        return std::make_shared<BlockRankOneOperator>(n, t.y, t.x, 1.0 / norm);
    }
    std::vector<CsrMatrix::Triplet> entries;
    const auto blocks = diagonal_blocks(net);
    for (int l = 0; l < layers(net); ++l) {
        const auto first = static_cast<std::size_t>(n) * static_cast<std::size_t>(l);
        blocks[l].for_each([&](int r, int c, double) {
            entries.push_back({static_cast<int>(first) + r, static_cast<int>(first) + c,
                               t.y[first + r] * t.x[first + c] / norm});
        });
    }
    const auto dim = static_cast<int>(supra_dim(net));
    return std::make_shared<CsrOperator>(CsrMatrix::from_triplets(dim, dim, std::move(entries)));
}

double symmetric_sensitivity_entry(const PerronTriple& t, const Network& net, const EdgeKey& e) {
    if (directed(net)) {
        throw InputError("symmetric sensitivity needs an undirected network");
    }
    check_edge(net, e);
    const auto [a, b] = supra_position(nodes(net), e);
    return 2.0 * t.x[a] * t.x[b];
}

CsrMatrix spectral_impact(const Network& net, const PerronTriple& t) {
    auto triplets = supra_triplets(net);
    for (auto& e : triplets) {
        e.value = -e.value * t.kappa * t.y[static_cast<std::size_t>(e.row)] *
                  t.x[static_cast<std::size_t>(e.col)] / t.rho;
    }
    const auto dim = static_cast<int>(supra_dim(net));
    return CsrMatrix::from_triplets(dim, dim, std::move(triplets));
}

std::vector<CsrMatrix> spectral_impact_layers(const MultiplexNetwork& net, const PerronTriple& t) {
    std::vector<CsrMatrix> out;
    const int n = net.nodes();
    for (int l = 1; l <= net.layers(); ++l) {
        auto triplets = net.layer(l).triplets();
        const auto first = static_cast<std::size_t>(n) * static_cast<std::size_t>(l - 1);
        for (auto& e : triplets) {
            e.value = -e.value * t.kappa * t.y[first + static_cast<std::size_t>(e.row)] *
                      t.x[first + static_cast<std::size_t>(e.col)] / t.rho;
        }
        out.push_back(CsrMatrix::from_triplets(n, n, std::move(triplets)));
    }
    return out;
}

} // namespace perron
