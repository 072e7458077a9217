#pragma once

#include <filesystem>
#include <random>

#include <Eigen/Dense>

#include "perron/network.hpp"

namespace perron::testing {

std::filesystem::path source_dir();

/// The four-node, three-layer directed example shipped in data/.
MultilayerNetwork example1();

/// Random multiplex whose first layer carries a Hamiltonian cycle, so the
/// supra graph is strongly connected whenever gamma > 0. Weights in [0.5, 2].
MultiplexNetwork random_multiplex(std::mt19937_64& rng, int n, int layers, double density,
                                  double gamma, bool directed);

/// Random general multilayer network threaded by a Hamiltonian cycle over all
/// n*layers supra nodes. No supra self-loops.
MultilayerNetwork random_multilayer(std::mt19937_64& rng, int n, int layers, double density,
                                    bool directed);

} // namespace perron::testing
