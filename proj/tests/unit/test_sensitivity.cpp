#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "perron/errors.hpp"
#include "perron/sensitivity.hpp"

using namespace perron;

namespace {

Eigen::VectorXd as_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

// kappa * y x^T masked by an explicit 0/1 matrix.
Eigen::MatrixXd masked(const PerronTriple& t, const Eigen::MatrixXd& mask) {
    return t.kappa * (as_eigen(t.y) * as_eigen(t.x).transpose()).cwiseProduct(mask);
}

Eigen::MatrixXd block_mask(int n, int layers) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * layers, n * layers);
    for (int l = 0; l < layers; ++l) {
        m.block(l * n, l * n, n, n).setOnes();
    }
    return m;
}

Eigen::MatrixXd pattern_mask(const MultiplexNetwork& net) {
    const int n = net.nodes();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * net.layers(), n * net.layers());
    for (int l = 0; l < net.layers(); ++l) {
        net.layer(l + 1).for_each([&](int r, int c, double) { m(l * n + r, l * n + c) = 1.0; });
    }
    return m;
}

} // namespace

TEST_CASE("sensitivity matrices match their dense definitions") {
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 8; ++rep) {
        const bool directed = rep % 2 == 0;
        const auto net = testing::random_multiplex(rng, 5 + rep, 3, 0.3, 0.6, directed);
        const Network g{net};
        const auto t = perron::perron(g);
        const int n = net.nodes();
        const int nl = net.layers();
        const auto dim = n * nl;

        const auto s = sensitivity_matrix(t, n, nl);
        const auto sd = sensitivity_matrix_multiplex(t, net);
        const auto ss = structured_sensitivity_matrix(t, net);
        const Eigen::MatrixXd full = masked(t, Eigen::MatrixXd::Ones(dim, dim));
        const Eigen::MatrixXd d = masked(t, block_mask(n, nl));
        const Eigen::MatrixXd p = masked(t, pattern_mask(net));

        CHECK((s.to_dense() - full).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((sd.to_dense() - d).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((ss.to_dense() - p).cwiseAbs().maxCoeff() <= 1e-15);

        CHECK(s.frobenius_norm() == doctest::Approx(t.kappa).epsilon(1e-12));
        CHECK(sd.frobenius_norm() == doctest::Approx(d.norm()).epsilon(1e-12));
        CHECK(ss.frobenius_norm() == doctest::Approx(p.norm()).epsilon(1e-12));
        CHECK(s.total() == doctest::Approx(full.sum()).epsilon(1e-12));
        CHECK(sd.total() == doctest::Approx(d.sum()).epsilon(1e-12));
        CHECK(ss.total() == doctest::Approx(p.sum()).epsilon(1e-12));

        const double kd = structured_condition_number(t, Cone::block_diagonal, g);
        const double ks = structured_condition_number(t, Cone::sparsity, g);
        CHECK(kd == doctest::Approx(sd.frobenius_norm()).epsilon(1e-12));
        CHECK(ks == doctest::Approx(ss.frobenius_norm()).epsilon(1e-12));
        CHECK(ks <= kd);
        CHECK(kd <= t.kappa);

        CHECK(s.entry({2, 3, 1, 2}) == doctest::Approx(sensitivity_entry(t, n, {2, 3, 1, 2})));
        CHECK(sd.entry({2, 3, 1, 2}) == 0.0);
    }
}

TEST_CASE("structured Wilkinson perturbations attain the structured condition numbers") {
    std::mt19937_64 rng(67);
    const auto net = testing::random_multiplex(rng, 7, 3, 0.3, 1.0, true);
    const Network g{net};
    const auto t = perron::perron(g);
    for (Cone cone : {Cone::block_diagonal, Cone::sparsity}) {
        const auto e = structured_wilkinson(t, cone, g);
        const Eigen::MatrixXd m = materialize(*e);
        CHECK(m.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.minCoeff() >= 0.0);
        CHECK(first_order_delta_rho(t, *e, 1.0) ==
              doctest::Approx(structured_condition_number(t, cone, g)).epsilon(1e-12));
    }
    const Eigen::MatrixXd w = materialize(*wilkinson(t));
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(first_order_delta_rho(t, w, 1.0) == doctest::Approx(t.kappa).epsilon(1e-12));
    CHECK(materialize(*normalized_all_ones(6)).norm() == doctest::Approx(1.0));
}

TEST_CASE("vanishing structured projection is an error") {
    const MultiplexNetwork net(3, 2, 1.0, false);
    PerronTriple t;
    t.x = Vector(6, 1.0 / std::sqrt(6.0));
    t.y = t.x;
    CHECK_THROWS_AS(structured_wilkinson(t, Cone::sparsity, Network{net}), NumericalError);
    CHECK(structured_condition_number(t, Cone::sparsity, Network{net}) == 0.0);
}

TEST_CASE("first-order shift approximates the exact shift to second order") {
    std::mt19937_64 rng(71);
    const Network g = testing::random_multilayer(rng, 5, 3, 0.15, true);
    const auto t = perron::perron(g);
    const auto base = std::make_shared<SupraOperator>(g);
    const auto w = wilkinson(t);
    auto error = [&](double eps) {
        return std::abs(perron::perron(*perturbed(base, eps, w)).rho - t.rho - first_order_delta_rho(t, *w, eps));
    };
    const double ratio = error(1e-2) / error(5e-3);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("symmetric sensitivity") {
    std::mt19937_64 rng(73);
    const Network und = testing::random_multiplex(rng, 6, 2, 0.4, 1.0, false);
    const auto t = perron::perron(und);
    const EdgeKey e{1, 4, 2, 2};
    const auto [a, b] = supra_position(6, e);
    CHECK(symmetric_sensitivity_entry(t, und, e) == doctest::Approx(2.0 * t.x[a] * t.x[b]));
    const auto sym = SensitivityMatrix::symmetric(t, und);
    CHECK(sym.entry(e) == doctest::Approx(symmetric_sensitivity_entry(t, und, e)).epsilon(1e-8));
    const Eigen::MatrixXd dense = sym.to_dense();
    CHECK(sym.frobenius_norm() == doctest::Approx(dense.norm()).epsilon(1e-12));
    CHECK(sym.total() == doctest::Approx(dense.sum()).epsilon(1e-12));

    const Network dir = testing::random_multiplex(rng, 6, 2, 0.4, 1.0, true);
    const auto td = perron::perron(dir);
    CHECK_THROWS_AS(symmetric_sensitivity_entry(td, dir, e), InputError);
    CHECK_THROWS_AS(SensitivityMatrix::symmetric(td, dir), InputError);
}

TEST_CASE("spectral impact sums to minus one") {
    std::mt19937_64 rng(79);
    for (bool multiplex : {true, false}) {
        const Network g = multiplex ? Network{testing::random_multiplex(rng, 6, 3, 0.3, 0.5, true)}
                                    : Network{testing::random_multilayer(rng, 4, 3, 0.2, true)};
        const auto t = perron::perron(g);
        const auto impact = spectral_impact(g, t);
        double sum = 0.0;
        impact.for_each([&](int r, int c, double v) {
            const auto e = edge_at(nodes(g), static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            CHECK(v == doctest::Approx(-weight(g, e) * sensitivity_entry(t, nodes(g), e) / t.rho));
            sum += v;
        });
        // sum_ab B_ab kappa y_a x_b / rho = kappa y^T B x / rho = 1
        CHECK(sum == doctest::Approx(-1.0).epsilon(1e-9));
        if (const auto* mx = std::get_if<MultiplexNetwork>(&g)) {
            const auto layers = spectral_impact_layers(*mx, t);
            CHECK(layers.size() == 3);
            for (int l = 1; l <= 3; ++l) {
                CHECK(layers[l - 1].nnz() == mx->layer(l).nnz());
            }
        }
    }
}

TEST_CASE("example network Wilkinson and all-ones shifts") {
    const Network g{testing::example1()};
    const auto t = perron::perron(g);
    const auto base = std::make_shared<SupraOperator>(g);
    CHECK(std::abs(perron::perron(*perturbed(base, 0.3, wilkinson(t))).rho - 2.6512) <= 1e-3);
    CHECK(std::abs(perron::perron(*perturbed(base, 0.3, normalized_all_ones(12))).rho - t.rho - 0.2561) <= 1e-3);
}
