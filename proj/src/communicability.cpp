#include "perron/communicability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "perron/errors.hpp"

namespace perron {

double exp0(double t) { return std::expm1(t); }

Eigentensors eigentensors(const PerronTriple& t, int nodes, int layers) {
    const auto dim = static_cast<std::size_t>(nodes) * static_cast<std::size_t>(layers);
    if (nodes <= 0 || layers <= 0 || t.x.size() != dim || t.y.size() != dim) {
        throw InputError("Perron vectors do not have length N*L");
    }
    // Column-major storage makes the reshape a straight copy.
    Eigentensors e{Eigen::Map<const Eigen::MatrixXd>(t.x.data(), nodes, layers),
                   Eigen::Map<const Eigen::MatrixXd>(t.y.data(), nodes, layers)};
    return e;
}

MarginalCentralities marginal_layer_centralities(const Eigentensors& e) {
    const Eigen::VectorXd cy = e.y.colwise().sum().transpose();
    const Eigen::VectorXd cx = e.x.colwise().sum().transpose();
    return {Vector(cy.data(), cy.data() + cy.size()), Vector(cx.data(), cx.data() + cx.size())};
}

Vector versatility(const Eigentensors& e, std::span<const double> weights) {
    if (weights.size() != static_cast<std::size_t>(e.y.cols())) {
        throw InputError("versatility weights must have one entry per layer");
    }
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0.0; })) {
        throw InputError("versatility weights must be nonnegative");
    }
    const Eigen::Map<const Eigen::VectorXd> w(weights.data(), e.y.cols());
    const Eigen::VectorXd nu = e.y * w;
    return Vector(nu.data(), nu.data() + nu.size());
}

Vector versatility(const Eigentensors& e) {
    const Vector ones(static_cast<std::size_t>(e.y.cols()), 1.0);
    return versatility(e, ones);
}

CommunicabilityReport perron_communicability(const PerronTriple& t, int nodes, int layers) {
    const auto tensors = eigentensors(t, nodes, layers);
    auto marginal = marginal_layer_centralities(tensors);

    CommunicabilityReport r;
    r.rho = t.rho;
    const double e0 = exp0(t.rho);
    const double sum_y = std::accumulate(t.y.begin(), t.y.end(), 0.0);
    const double sum_x = std::accumulate(t.x.begin(), t.x.end(), 0.0);
    r.c_pn = e0 * sum_y * sum_x;

    const double dot = std::inner_product(marginal.c_y.begin(), marginal.c_y.end(),
                                          marginal.c_x.begin(), 0.0);
    const double ny = std::sqrt(std::inner_product(marginal.c_y.begin(), marginal.c_y.end(),
                                                   marginal.c_y.begin(), 0.0));
    const double nx = std::sqrt(std::inner_product(marginal.c_x.begin(), marginal.c_x.end(),
                                                   marginal.c_x.begin(), 0.0));
    r.c_pn_marginal = e0 * dot;
    const double cos_phi = std::clamp(dot / (ny * nx), -1.0, 1.0);
    r.phi = std::acos(cos_phi);

    const double nl = static_cast<double>(nodes) * static_cast<double>(layers);
    r.lower = e0;
    r.upper_cos = nl * e0 * cos_phi;
    r.upper_basic = nl * e0;
    r.c_y = std::move(marginal.c_y);
    r.c_x = std::move(marginal.c_x);
    r.versatility = versatility(tensors);
    return r;
}

double total_communicability0(const Network& net, std::size_t dense_cap) {
    const Eigen::MatrixXd b = assemble_dense(net, dense_cap);
    const Eigen::MatrixXd e = b.exp();
    return e.sum() - static_cast<double>(b.rows());
}

double total_to_perron_ratio(double total0, const PerronTriple& t,
                             const CommunicabilityReport& report) {
    return total0 / (t.kappa * report.c_pn);
}

HubAuthority hub_authority_communicability(const Network& net, const SolverOptions& options) {
    auto side = [&](const OperatorPtr& op, double& rho) {
        const auto t = perron(*op, options);
        rho = t.rho;
        const double s = std::accumulate(t.x.begin(), t.x.end(), 0.0);
        return exp0(t.rho) * s * s;
    };
    HubAuthority out;
    out.hub = side(hub_operator(net), out.rho_hub);
    out.authority = side(authority_operator(net), out.rho_authority);
    return out;
}

} // namespace perron
