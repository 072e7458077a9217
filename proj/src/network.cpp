#include "perron/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "perron/errors.hpp"

namespace perron {

namespace {

std::string describe(const EdgeKey& e) {
    return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + "," + std::to_string(e.k) +
           "," + std::to_string(e.l) + ")";
}

void check_dims(int nodes, int layers) {
    if (nodes <= 0 || layers <= 0) {
        throw InputError("node and layer counts must be positive");
    }
}

void check_range(int nodes, int layers, const EdgeKey& e) {
    if (e.i < 1 || e.i > nodes || e.j < 1 || e.j > nodes) {
        throw InputError("node id out of range in edge " + describe(e));
    }
    if (e.k < 1 || e.k > layers || e.l < 1 || e.l > layers) {
        throw InputError("layer id out of range in edge " + describe(e));
    }
}

void check_weight(const WeightedEdge& e) {
    if (!(e.weight > 0.0)) {
        throw InputError("nonpositive weight on edge " + describe(e.key));
    }
}

// Expands an undirected edge list and rejects duplicate positions.
std::vector<WeightedEdge> expand(std::span<const WeightedEdge> edges, bool directed) {
    std::vector<WeightedEdge> out;
    out.reserve(edges.size() * (directed ? 1 : 2));
    std::set<EdgeKey> seen;
    auto add = [&](const WeightedEdge& e) {
        if (!seen.insert(e.key).second) {
            throw InputError("duplicate edge " + describe(e.key));
        }
        out.push_back(e);
    };
    for (const auto& e : edges) {
        add(e);
        if (!directed && !is_self_loop(e.key)) {
            add({reversed(e.key), e.weight});
        }
    }
    return out;
}

} // namespace

EdgeKey edge_at(int n, std::size_t row, std::size_t col) {
    const auto nn = static_cast<std::size_t>(n);
    return {static_cast<int>(row % nn) + 1, static_cast<int>(col % nn) + 1,
            static_cast<int>(row / nn) + 1, static_cast<int>(col / nn) + 1};
}

// ---------------------------------------------------------------------------
// MultilayerNetwork

MultilayerNetwork::MultilayerNetwork(int nodes, int layers, bool directed)
    : nodes_(nodes), layers_(layers), directed_(directed) {
    check_dims(nodes, layers);
    blocks_.resize(static_cast<std::size_t>(layers) * static_cast<std::size_t>(layers));
}

MultilayerNetwork::MultilayerNetwork(int nodes, int layers, std::span<const WeightedEdge> edges,
                                     bool directed)
    : MultilayerNetwork(nodes, layers, directed) {
    for (const auto& e : edges) {
        check_range(nodes, layers, e.key);
        check_weight(e);
    }
    std::vector<std::vector<CsrMatrix::Triplet>> per_block(blocks_.size());
    for (const auto& e : expand(edges, directed)) {
        per_block[slot(e.key.k, e.key.l)].push_back({e.key.i - 1, e.key.j - 1, e.weight});
    }
    for (std::size_t s = 0; s < per_block.size(); ++s) {
        if (!per_block[s].empty()) {
            blocks_[s] = CsrMatrix::from_triplets(nodes, nodes, std::move(per_block[s]));
        }
    }
}

const CsrMatrix* MultilayerNetwork::block(int k, int l) const {
    const auto& b = blocks_.at(slot(k, l));
    return b ? &*b : nullptr;
}

double MultilayerNetwork::weight(const EdgeKey& e) const {
    check_range(nodes_, layers_, e);
    const auto* b = block(e.k, e.l);
    return b ? b->at(e.i - 1, e.j - 1) : 0.0;
}

std::size_t MultilayerNetwork::stored_entries() const {
    std::size_t total = 0;
    for (const auto& b : blocks_) {
        total += b ? b->nnz() : 0;
    }
    return total;
}

MultilayerNetwork MultilayerNetwork::with_entry(const EdgeKey& e, double w) const {
    check_range(nodes_, layers_, e);
    if (w < 0.0) {
        throw InputError("negative weight on edge " + describe(e));
    }
    MultilayerNetwork out = *this;
    auto& b = out.blocks_[slot(e.k, e.l)];
    const CsrMatrix base = b ? *b : CsrMatrix(nodes_, nodes_);
    CsrMatrix updated = base.with_value(e.i - 1, e.j - 1, w);
    if (updated.nnz() == 0) {
        b.reset();
    } else {
        b = std::move(updated);
    }
    return out;
}

// ---------------------------------------------------------------------------
// MultiplexNetwork

MultiplexNetwork::MultiplexNetwork(int nodes, int layers, double gamma, bool directed)
    : nodes_(nodes), gamma_(gamma), directed_(directed) {
    check_dims(nodes, layers);
    if (!(gamma >= 0.0)) {
        throw InputError("coupling weight gamma must be nonnegative");
    }
    layers_.assign(static_cast<std::size_t>(layers), CsrMatrix(nodes, nodes));
}

MultiplexNetwork::MultiplexNetwork(int nodes, int layers, std::span<const WeightedEdge> edges,
                                   double gamma, bool directed)
    : MultiplexNetwork(nodes, layers, gamma, directed) {
    for (const auto& e : edges) {
        check_range(nodes, layers, e.key);
        check_weight(e);
        if (e.key.k != e.key.l) {
            throw InputError("multiplex edges must stay within one layer: " + describe(e.key));
        }
        if (e.key.i == e.key.j) {
            throw InputError("self-loop not allowed in a multiplex: " + describe(e.key));
        }
    }
    std::vector<std::vector<CsrMatrix::Triplet>> per_layer(layers_.size());
    for (const auto& e : expand(edges, directed)) {
        per_layer[static_cast<std::size_t>(e.key.k - 1)].push_back(
            {e.key.i - 1, e.key.j - 1, e.weight});
    }
    for (std::size_t l = 0; l < per_layer.size(); ++l) {
        layers_[l] = CsrMatrix::from_triplets(nodes, nodes, std::move(per_layer[l]));
    }
}

double MultiplexNetwork::weight(const EdgeKey& e) const {
    check_range(nodes_, layers(), e);
    if (e.k == e.l) {
        return layer(e.k).at(e.i - 1, e.j - 1);
    }
    return e.i == e.j ? gamma_ : 0.0;
}

std::size_t MultiplexNetwork::intra_entries() const {
    std::size_t total = 0;
    for (const auto& a : layers_) {
        total += a.nnz();
    }
    return total;
}

MultiplexNetwork MultiplexNetwork::with_entry(const EdgeKey& e, double w) const {
    check_range(nodes_, layers(), e);
    if (e.k != e.l) {
        throw InputError("coupling entries of a multiplex cannot be edited: " + describe(e));
    }
    if (e.i == e.j) {
        throw InputError("self-loop not allowed in a multiplex: " + describe(e));
    }
    if (w < 0.0) {
        throw InputError("negative weight on edge " + describe(e));
    }
    MultiplexNetwork out = *this;
    auto& a = out.layers_[static_cast<std::size_t>(e.k - 1)];
    a = a.with_value(e.i - 1, e.j - 1, w);
    return out;
}

// ---------------------------------------------------------------------------
// Free functions over either network type

int nodes(const Network& net) {
    return std::visit([](const auto& n) { return n.nodes(); }, net);
}

int layers(const Network& net) {
    return std::visit([](const auto& n) { return n.layers(); }, net);
}

bool directed(const Network& net) {
    return std::visit([](const auto& n) { return n.directed(); }, net);
}

std::size_t supra_dim(const Network& net) {
    return static_cast<std::size_t>(nodes(net)) * static_cast<std::size_t>(layers(net));
}

double weight(const Network& net, const EdgeKey& e) {
    return std::visit([&](const auto& n) { return n.weight(e); }, net);
}

void check_edge(const Network& net, const EdgeKey& e) { check_range(nodes(net), layers(net), e); }

std::vector<CsrMatrix::Triplet> supra_triplets(const Network& net) {
    std::vector<CsrMatrix::Triplet> out;
    const int n = nodes(net);
    auto push = [&](const EdgeKey& e, double w) {
        const auto p = supra_position(n, e);
        out.push_back({static_cast<int>(p.row), static_cast<int>(p.col), w});
    };
    if (const auto* ml = std::get_if<MultilayerNetwork>(&net)) {
        out.reserve(ml->stored_entries());
        ml->for_each_entry(push);
    } else {
        const auto& mx = std::get<MultiplexNetwork>(net);
        mx.for_each_intra_entry(push);
        if (mx.gamma() > 0.0) {
            for (int k = 1; k <= mx.layers(); ++k) {
                for (int l = 1; l <= mx.layers(); ++l) {
                    if (k == l) {
                        continue;
                    }
                    for (int i = 1; i <= n; ++i) {
                        push({i, i, k, l}, mx.gamma());
                    }
                }
            }
        }
    }
    return out;
}

CsrMatrix supra_matrix(const Network& net) {
    const auto dim = static_cast<int>(supra_dim(net));
    return CsrMatrix::from_triplets(dim, dim, supra_triplets(net));
}

std::vector<WeightedEdge> editable_edges(const Network& net) {
    std::vector<WeightedEdge> out;
    auto push = [&](const EdgeKey& e, double w) { out.push_back({e, w}); };
    if (const auto* ml = std::get_if<MultilayerNetwork>(&net)) {
        ml->for_each_entry(push);
    } else {
        std::get<MultiplexNetwork>(net).for_each_intra_entry(push);
    }
    return out;
}

Eigen::MatrixXd assemble_dense(const Network& net, std::size_t cap) {
    const auto dim = supra_dim(net);
    if (dim > cap) {
        throw InfeasibleError("dense assembly of dimension " + std::to_string(dim) +
                              " exceeds the cap of " + std::to_string(cap));
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
    for (const auto& t : supra_triplets(net)) {
        b(t.row, t.col) = t.value;
    }
    return b;
}

bool is_strongly_connected(const CsrMatrix& adjacency) {
    const int n = adjacency.rows();
    if (n == 0) {
        return false;
    }
    if (n == 1) {
        return true;
    }
    auto reaches_all = [n](const CsrMatrix& g) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        const auto rp = g.row_ptr();
        const auto ci = g.col_idx();
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (std::size_t p = rp[v]; p < rp[v + 1]; ++p) {
                if (!seen[ci[p]]) {
                    seen[ci[p]] = 1;
                    ++count;
                    stack.push_back(ci[p]);
                }
            }
        }
        return count == n;
    };
    return reaches_all(adjacency) && reaches_all(adjacency.transposed());
}

bool is_strongly_connected(const Network& net) { return is_strongly_connected(supra_matrix(net)); }

Network apply_edge_delta(const Network& net, const EdgeKey& e, double delta) {
    check_edge(net, e);
    if (delta == 0.0) {
        return net;
    }
    const double w = weight(net, e) + delta;
    if (w < 0.0) {
        throw InputError("edit would make the weight of " + describe(e) + " negative");
    }
    const bool mirror = !directed(net) && !is_self_loop(e);
    return std::visit(
        [&](const auto& n) -> Network {
            auto out = n.with_entry(e, w);
            if (mirror) {
                out = out.with_entry(reversed(e), w);
            }
            return out;
        },
        net);
}

Network remove_edge(const Network& net, const EdgeKey& e) {
    const double w = weight(net, e);
    if (w == 0.0) {
        throw InputError("edge " + describe(e) + " does not exist");
    }
    return apply_edge_delta(net, e, -w);
}

MultilayerNetwork to_multilayer(const MultiplexNetwork& net) {
    std::vector<WeightedEdge> edges;
    const int n = net.nodes();
    for (const auto& t : supra_triplets(Network{net})) {
        // Triplets hold both orientations; an undirected target takes one of each pair.
        if (!net.directed() && t.row > t.col) {
            continue;
        }
        edges.push_back({edge_at(n, static_cast<std::size_t>(t.row), static_cast<std::size_t>(t.col)),
                         t.value});
    }
    return MultilayerNetwork(n, net.layers(), edges, net.directed());
}

ComponentRestriction largest_component(const MultiplexNetwork& net) {
    const int n = net.nodes();
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    net.for_each_intra_entry([&](const EdgeKey& e, double) {
        const int a = find(e.i - 1);
        const int b = find(e.j - 1);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    });
    std::vector<int> size(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        ++size[find(v)];
    }
    // Largest component; ties go to the one containing the lowest node id.
    int best = 0;
    for (int v = 0; v < n; ++v) {
        if (size[v] > size[best]) {
            best = v;
        }
    }
    std::vector<int> new_id(static_cast<std::size_t>(n), 0);
    std::vector<int> original;
    for (int v = 0; v < n; ++v) {
        if (find(v) == best) {
            original.push_back(v + 1);
            new_id[v] = static_cast<int>(original.size());
        }
    }
    std::vector<WeightedEdge> edges;
    net.for_each_intra_entry([&](const EdgeKey& e, double w) {
        if (new_id[e.i - 1] == 0) {
            return;
        }
        if (!net.directed() && e.i > e.j) {
            return;
        }
        edges.push_back({{new_id[e.i - 1], new_id[e.j - 1], e.k, e.l}, w});
    });
    MultiplexNetwork restricted(static_cast<int>(original.size()), net.layers(), edges, net.gamma(),
                                net.directed());
    return {std::move(restricted), std::move(original)};
}

} // namespace perron
