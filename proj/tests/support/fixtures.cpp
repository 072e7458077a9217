#include "fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "perron/io.hpp"

namespace perron::testing {

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

struct EdgeSet {
    int n;
    bool directed;
    std::set<Pair> used;
    std::vector<WeightedEdge> edges;

    bool add(const EdgeKey& e, double w) {
        const auto [a, b] = supra_position(n, e);
        const Pair key = directed ? Pair{a, b} : Pair{std::min(a, b), std::max(a, b)};
        if (a == b || !used.insert(key).second) {
            return false;
        }
        edges.push_back({e, w});
        return true;
    }
};

std::vector<int> cycle_order(std::mt19937_64& rng, int count) {
    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

} // namespace

std::filesystem::path source_dir() { return PERRON_SOURCE_DIR; }

MultilayerNetwork example1() {
    return load_multilayer(source_dir() / "data" / "example1.txt", true);
}

MultiplexNetwork random_multiplex(std::mt19937_64& rng, int n, int layers, double density,
                                  double gamma, bool directed) {
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    EdgeSet set{n, directed, {}, {}};
    const auto order = cycle_order(rng, n);
    for (int p = 0; p < n && n > 1; ++p) {
        const int i = order[static_cast<std::size_t>(p)] + 1;
        const int j = order[static_cast<std::size_t>((p + 1) % n)] + 1;
        set.add({i, j, 1, 1}, weight(rng));
    }
    for (int l = 1; l <= layers; ++l) {
        for (int i = 1; i <= n; ++i) {
            for (int j = directed ? 1 : i + 1; j <= n; ++j) {
                if (i != j && coin(rng) < density) {
                    set.add({i, j, l, l}, weight(rng));
                }
            }
        }
    }
    return MultiplexNetwork(n, layers, set.edges, gamma, directed);
}

MultilayerNetwork random_multilayer(std::mt19937_64& rng, int n, int layers, double density,
                                    bool directed) {
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    EdgeSet set{n, directed, {}, {}};
    const int dim = n * layers;
    const auto order = cycle_order(rng, dim);
    for (int p = 0; p < dim && dim > 1; ++p) {
        const auto from = edge_at(n, static_cast<std::size_t>(order[static_cast<std::size_t>(p)]),
                                  static_cast<std::size_t>(order[static_cast<std::size_t>((p + 1) % dim)]));
        set.add(from, weight(rng));
    }
    for (int a = 0; a < dim; ++a) {
        for (int b = directed ? 0 : a + 1; b < dim; ++b) {
            if (a != b && coin(rng) < density) {
                set.add(edge_at(n, static_cast<std::size_t>(a), static_cast<std::size_t>(b)),
                        weight(rng));
            }
        }
    }
    return MultilayerNetwork(n, layers, set.edges, directed);
}

} // namespace perron::testing
