#pragma once

#include <span>

#include <Eigen/Dense>

#include "perron/eigensolver.hpp"
#include "perron/network.hpp"

namespace perron {

/// e^t - 1 without cancellation near 0.
double exp0(double t);

/// N x L reshapes of the Perron vectors: column l holds the entries of layer l.
struct Eigentensors {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
};

Eigentensors eigentensors(const PerronTriple& t, int nodes, int layers);

/// Column sums of the eigentensors: c_y = Y^T 1, c_x = X^T 1.
struct MarginalCentralities {
    Vector c_y;
    Vector c_x;
};

MarginalCentralities marginal_layer_centralities(const Eigentensors& e);

/// nu = Y * weights (weights default to all ones).
Vector versatility(const Eigentensors& e, std::span<const double> weights);
Vector versatility(const Eigentensors& e);

struct CommunicabilityReport {
    double rho = 0.0;
    double c_pn = 0.0;           // exp0(rho) (1^T y)(x^T 1)
    double c_pn_marginal = 0.0;  // exp0(rho) c_y^T c_x
    double lower = 0.0;          // exp0(rho)
    double upper_cos = 0.0;      // NL exp0(rho) cos(phi)
    double upper_basic = 0.0;    // NL exp0(rho)
    Vector c_y;
    Vector c_x;
    double phi = 0.0;  // angle between c_y and c_x
    Vector versatility;
};

CommunicabilityReport perron_communicability(const PerronTriple& t, int nodes, int layers);

/// 1^T (exp(B) - I) 1 from a dense matrix exponential. Throws InfeasibleError
/// above the dense cap.
double total_communicability0(const Network& net, std::size_t dense_cap = kDefaultDenseCap);

/// C0_TN / (kappa * C_PN); close to 1 when rho dominates the spectrum.
double total_to_perron_ratio(double total0, const PerronTriple& t,
                             const CommunicabilityReport& report);

struct HubAuthority {
    double hub = 0.0;        // exp0(rho_hub) (1^T x_hub)^2
    double authority = 0.0;  // exp0(rho_auth) (1^T x_auth)^2
    double rho_hub = 0.0;
    double rho_authority = 0.0;
};

HubAuthority hub_authority_communicability(const Network& net, const SolverOptions& options = {});

} // namespace perron
