#include <doctest.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "perron/errors.hpp"
#include "perron/network.hpp"
#include "perron/operator.hpp"

using namespace perron;

namespace {

// Independent assembly of diag(A_l) + gamma (1 1^T kron I - I).
Eigen::MatrixXd multiplex_reference(const MultiplexNetwork& net) {
    const int n = net.nodes();
    const int nl = net.layers();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n * nl, n * nl);
    for (int l = 0; l < nl; ++l) {
        net.layer(l + 1).for_each([&](int r, int c, double w) { b(l * n + r, l * n + c) = w; });
    }
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(nl, nl);
    for (int k = 0; k < nl; ++k) {
        for (int l = 0; l < nl; ++l) {
            if (k != l) {
                b.block(k * n, l * n, n, n) += net.gamma() * Eigen::MatrixXd::Identity(n, n) * ones(k, l);
            }
        }
    }
    return b;
}

Eigen::VectorXd as_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

} // namespace

TEST_CASE("flattened index and its inverse") {
    CHECK(supra_index(4, 1, 1) == 0);
    CHECK(supra_index(4, 3, 2) == 6);
    const EdgeKey e{2, 4, 3, 1};
    const auto [r, c] = supra_position(4, e);
    CHECK(r == 9);
    CHECK(c == 3);
    CHECK(edge_at(4, r, c) == e);
}

TEST_CASE("two single-node layers with unit coupling form a 2-cycle") {
    const MultiplexNetwork net(1, 2, 1.0, false);
    const Eigen::MatrixXd b = assemble_dense(net);
    CHECK(b(0, 0) == 0.0);
    CHECK(b(0, 1) == 1.0);
    CHECK(b(1, 0) == 1.0);
    const SupraOperator op(net);
    const auto out = op.apply(Vector{1.0, 0.0});
    CHECK(out == Vector{0.0, 1.0});
}

TEST_CASE("multiplex supra matrix matches the Kronecker form") {
    std::mt19937_64 rng(7);
    for (bool directed : {false, true}) {
        const auto net = testing::random_multiplex(rng, 6, 3, 0.3, 0.7, directed);
        const Eigen::MatrixXd expect = multiplex_reference(net);
        const Eigen::MatrixXd got = assemble_dense(net);
        CHECK((got - expect).cwiseAbs().maxCoeff() == 0.0);
        if (!directed) {
            CHECK(got.isApprox(got.transpose()));
        }
    }
}

TEST_CASE("supra operator agrees with the assembled matrix, both directions and backends") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 6; ++rep) {
        const Network net = rep % 2 == 0
                                ? Network{testing::random_multiplex(rng, 5 + rep, 3, 0.3, 0.5 * rep, true)}
                                : Network{testing::random_multilayer(rng, 4, 2 + rep, 0.2, rep % 3 == 0)};
        const Eigen::MatrixXd b = assemble_dense(net);
        Vector v(supra_dim(net));
        for (auto& e : v) {
            e = g(rng);
        }
        const SupraOperator par(net, kernels::Exec::parallel);
        const SupraOperator ser(net, kernels::Exec::serial);
        const Eigen::VectorXd bv = b * as_eigen(v);
        const Eigen::VectorXd btv = b.transpose() * as_eigen(v);
        CHECK((as_eigen(par.apply(v)) - bv).norm() <= 1e-12 * (1.0 + bv.norm()));
        CHECK((as_eigen(par.apply_transpose(v)) - btv).norm() <= 1e-12 * (1.0 + btv.norm()));
        CHECK(par.apply(v) == ser.apply(v));
        CHECK(par.apply_transpose(v) == ser.apply_transpose(v));
    }
}

TEST_CASE("example network: operator on ones gives row sums") {
    const auto net = testing::example1();
    CHECK(net.nodes() == 4);
    CHECK(net.layers() == 3);
    const Eigen::MatrixXd b = assemble_dense(net);
    const auto out = SupraOperator(net).apply(Vector(12, 1.0));
    for (int r = 0; r < 12; ++r) {
        CHECK(out[r] == doctest::Approx(b.row(r).sum()));
    }
    CHECK(is_strongly_connected(Network{net}));
}

TEST_CASE("undirected construction mirrors and rejects doubled listings") {
    const std::vector<WeightedEdge> one{{{1, 2, 1, 1}, 2.0}};
    const MultiplexNetwork net(2, 1, one, 0.0, false);
    CHECK(net.layer(1).at(0, 1) == 2.0);
    CHECK(net.layer(1).at(1, 0) == 2.0);

    const std::vector<WeightedEdge> both{{{1, 2, 1, 1}, 2.0}, {{2, 1, 1, 1}, 2.0}};
    CHECK_THROWS_AS(MultiplexNetwork(2, 1, both, 0.0, false), InputError);
    CHECK_NOTHROW(MultiplexNetwork(2, 1, both, 0.0, true));
    CHECK_THROWS_AS(MultilayerNetwork(2, 1, both, false), InputError);
}

TEST_CASE("invalid edges are rejected") {
    CHECK_THROWS_AS(MultiplexNetwork(2, 2, std::vector<WeightedEdge>{{{1, 2, 1, 2}, 1.0}}, 1.0, true),
                    InputError);
    CHECK_THROWS_AS(MultiplexNetwork(2, 1, std::vector<WeightedEdge>{{{1, 1, 1, 1}, 1.0}}, 1.0, true),
                    InputError);
    CHECK_THROWS_AS(MultilayerNetwork(2, 1, std::vector<WeightedEdge>{{{1, 3, 1, 1}, 1.0}}, true),
                    InputError);
    CHECK_THROWS_AS(MultilayerNetwork(2, 1, std::vector<WeightedEdge>{{{1, 2, 1, 1}, -1.0}}, true),
                    InputError);
    CHECK_THROWS_AS(MultiplexNetwork(2, 1, -1.0, true), InputError);
}

TEST_CASE("edge deltas create, update and remove entries") {
    const Network net = MultilayerNetwork(3, 1, std::vector<WeightedEdge>{{{1, 2, 1, 1}, 1.0}}, false);
    const auto grown = apply_edge_delta(net, {2, 3, 1, 1}, 0.5);
    CHECK(weight(grown, {2, 3, 1, 1}) == 0.5);
    CHECK(weight(grown, {3, 2, 1, 1}) == 0.5);
    const auto shrunk = apply_edge_delta(net, {1, 2, 1, 1}, -0.25);
    CHECK(weight(shrunk, {2, 1, 1, 1}) == 0.75);
    const auto gone = apply_edge_delta(net, {1, 2, 1, 1}, -1.0);
    CHECK(weight(gone, {1, 2, 1, 1}) == 0.0);
    CHECK(weight(gone, {2, 1, 1, 1}) == 0.0);
    CHECK_THROWS_AS(apply_edge_delta(net, {1, 2, 1, 1}, -2.0), InputError);
    CHECK_THROWS_AS(remove_edge(net, {1, 3, 1, 1}), InputError);
    CHECK(weight(remove_edge(net, {2, 1, 1, 1}), {1, 2, 1, 1}) == 0.0);
}

TEST_CASE("multiplex edits stay intra-layer") {
    const Network net = MultiplexNetwork(2, 2, std::vector<WeightedEdge>{{{1, 2, 1, 1}, 1.0}}, 1.0, true);
    CHECK(weight(net, {1, 1, 1, 2}) == 1.0);
    CHECK_THROWS_AS(apply_edge_delta(net, {1, 1, 1, 2}, 1.0), InputError);
    CHECK_THROWS_AS(apply_edge_delta(net, {1, 2, 1, 2}, 1.0), InputError);
    CHECK(weight(apply_edge_delta(net, {2, 1, 2, 2}, 1.0), {2, 1, 2, 2}) == 1.0);
    CHECK(editable_edges(net).size() == 1);
}

TEST_CASE("strong connectivity") {
    const Network cycle = MultilayerNetwork(2, 1, std::vector<WeightedEdge>{{{1, 2, 1, 1}, 1.0}}, false);
    CHECK(is_strongly_connected(cycle));
    const Network path = MultilayerNetwork(2, 1, std::vector<WeightedEdge>{{{1, 2, 1, 1}, 1.0}}, true);
    CHECK_FALSE(is_strongly_connected(path));
    CHECK_FALSE(is_strongly_connected(Network{MultilayerNetwork(3, 1, true)}));
    CHECK(is_strongly_connected(Network{MultilayerNetwork(1, 1, true)}));
    // Coupling alone connects copies of a node, nothing more.
    CHECK_FALSE(is_strongly_connected(Network{MultiplexNetwork(2, 2, 1.0, false)}));
    CHECK(is_strongly_connected(Network{MultiplexNetwork(1, 3, 1.0, false)}));
}

TEST_CASE("explicit general form of a multiplex has the same supra matrix") {
    std::mt19937_64 rng(17);
    for (bool directed : {false, true}) {
        const auto mx = testing::random_multiplex(rng, 5, 3, 0.4, 0.8, directed);
        const auto ml = to_multilayer(mx);
        CHECK(ml.directed() == directed);
        CHECK(supra_matrix(Network{ml}) == supra_matrix(Network{mx}));
    }
}

TEST_CASE("largest component keeps the biggest aggregate piece") {
    // Nodes 1-3 linked across layers, node 4-5 a pair, node 6 isolated.
    const std::vector<WeightedEdge> edges{
        {{1, 2, 1, 1}, 1.0}, {{2, 3, 2, 2}, 2.0}, {{4, 5, 1, 1}, 1.0}};
    const MultiplexNetwork net(6, 2, edges, 1.0, false);
    const auto lc = largest_component(net);
    CHECK(lc.network.nodes() == 3);
    CHECK(lc.original_ids == std::vector<int>{1, 2, 3});
    CHECK(lc.network.layer(2).at(1, 2) == 2.0);
    CHECK(lc.network.gamma() == 1.0);
    CHECK(is_strongly_connected(Network{lc.network}));
}

TEST_CASE("dense assembly respects the cap") {
    CHECK_THROWS_AS(assemble_dense(Network{MultiplexNetwork(10, 10, 1.0, false)}, 50), InfeasibleError);
}
