#pragma once

#include <cstddef>
#include <compare>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "perron/csr.hpp"

namespace perron {

/// Edge from node i in layer k to node j in layer l. All indices are 1-based.
struct EdgeKey {
    int i = 1;
    int j = 1;
    int k = 1;
    int l = 1;

    auto operator<=>(const EdgeKey&) const = default;
};

inline EdgeKey reversed(const EdgeKey& e) { return {e.j, e.i, e.l, e.k}; }
inline bool is_self_loop(const EdgeKey& e) { return e.i == e.j && e.k == e.l; }

struct WeightedEdge {
    EdgeKey key;
    double weight = 0.0;
};

/// Flattened position of (node, layer), both 1-based, in a vector of length n*L.
/// The result is 0-based: n*(layer-1) + node-1.
inline std::size_t supra_index(int n, int node, int layer) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(layer - 1) +
           static_cast<std::size_t>(node - 1);
}

/// Row and column of an edge in the supra-adjacency matrix (0-based).
struct SupraPosition {
    std::size_t row;
    std::size_t col;
};

inline SupraPosition supra_position(int n, const EdgeKey& e) {
    return {supra_index(n, e.i, e.k), supra_index(n, e.j, e.l)};
}

/// Inverse of supra_position.
EdgeKey edge_at(int n, std::size_t row, std::size_t col);

/**
 * General multilayer network: an L x L grid of N x N nonnegative blocks.
 *
 * Block (k, l) holds the weights of edges from layer k to layer l. Blocks
 * without edges are not stored. An undirected network stores both
 * orientations of every edge, so its supra matrix is symmetric.
 */
class MultilayerNetwork {
public:
    MultilayerNetwork(int nodes, int layers, bool directed);

    /// Throws InputError on out-of-range ids, nonpositive weights or
    /// duplicates. When undirected, each edge also fills its reverse, and
    /// listing both orientations counts as a duplicate.
    MultilayerNetwork(int nodes, int layers, std::span<const WeightedEdge> edges, bool directed);

    int nodes() const noexcept { return nodes_; }
    int layers() const noexcept { return layers_; }
    bool directed() const noexcept { return directed_; }

    /// nullptr when no edge runs from layer k to layer l (1-based layers).
    const CsrMatrix* block(int k, int l) const;

    double weight(const EdgeKey& e) const;
    std::size_t stored_entries() const;

    /// Copy with the (i,k)->(j,l) entry set to w; w == 0 removes it.
    /// Does not mirror; callers handle symmetry.
    MultilayerNetwork with_entry(const EdgeKey& e, double w) const;

    /// f(EdgeKey, weight) for every stored entry, blocks in (k, l) order.
    template <class F>
    void for_each_entry(F&& f) const {
        for (int k = 1; k <= layers_; ++k) {
            for (int l = 1; l <= layers_; ++l) {
                if (const auto* b = block(k, l)) {
                    b->for_each([&](int r, int c, double w) { f(EdgeKey{r + 1, c + 1, k, l}, w); });
                }
            }
        }
    }

    bool operator==(const MultilayerNetwork&) const = default;

private:
    std::size_t slot(int k, int l) const {
        return static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(layers_) +
               static_cast<std::size_t>(l - 1);
    }

    int nodes_;
    int layers_;
    bool directed_;
    std::vector<std::optional<CsrMatrix>> blocks_;
};

/**
 * Multiplex network: L intra-layer adjacency matrices coupled by gamma times
 * the identity between every pair of layers.
 *
 * The coupling is implicit and fixed by the model. Only intra-layer entries
 * can be edited, and self-loops are rejected.
 */
class MultiplexNetwork {
public:
    MultiplexNetwork(int nodes, int layers, double gamma, bool directed);
    /// Edges must satisfy k == l and i != j.
    MultiplexNetwork(int nodes, int layers, std::span<const WeightedEdge> edges, double gamma,
                     bool directed);

    int nodes() const noexcept { return nodes_; }
    int layers() const noexcept { return static_cast<int>(layers_.size()); }
    double gamma() const noexcept { return gamma_; }
    bool directed() const noexcept { return directed_; }

    const CsrMatrix& layer(int l) const { return layers_.at(static_cast<std::size_t>(l - 1)); }

    /// Supra-matrix weight, including gamma on (i,k)->(i,l) for k != l.
    double weight(const EdgeKey& e) const;
    std::size_t intra_entries() const;

    MultiplexNetwork with_entry(const EdgeKey& e, double w) const;

    template <class F>
    void for_each_intra_entry(F&& f) const {
        for (int l = 1; l <= layers(); ++l) {
            layer(l).for_each([&](int r, int c, double w) { f(EdgeKey{r + 1, c + 1, l, l}, w); });
        }
    }

    bool operator==(const MultiplexNetwork&) const = default;

private:
    int nodes_;
    double gamma_;
    bool directed_;
    std::vector<CsrMatrix> layers_;
};

using Network = std::variant<MultilayerNetwork, MultiplexNetwork>;

int nodes(const Network& net);
int layers(const Network& net);
bool directed(const Network& net);
std::size_t supra_dim(const Network& net);
double weight(const Network& net, const EdgeKey& e);

/// Validates 1-based indices against the network dimensions.
void check_edge(const Network& net, const EdgeKey& e);

/// Every nonzero of the supra matrix, multiplex coupling included.
std::vector<CsrMatrix::Triplet> supra_triplets(const Network& net);
CsrMatrix supra_matrix(const Network& net);

/// Editable edges: every stored entry of a multilayer network, or the
/// intra-layer entries of a multiplex (coupling excluded).
std::vector<WeightedEdge> editable_edges(const Network& net);

inline constexpr std::size_t kDefaultDenseCap = 5000;

/// Dense supra-adjacency matrix. Throws InfeasibleError when n*L > cap.
Eigen::MatrixXd assemble_dense(const Network& net, std::size_t cap = kDefaultDenseCap);

/// Whether the directed graph of the supra matrix is strongly connected.
bool is_strongly_connected(const Network& net);
bool is_strongly_connected(const CsrMatrix& adjacency);

/**
 * New network with weight(e) increased by delta.
 *
 * Creates the edge when absent and removes it when the result is 0. An
 * undirected network updates the reverse entry identically. Throws
 * InputError on a negative result, on inter-layer or self-loop edits of a
 * multiplex, and on indices out of range.
 */
Network apply_edge_delta(const Network& net, const EdgeKey& e, double delta);

/// Removes e (and its reverse when undirected). Throws InputError if absent.
Network remove_edge(const Network& net, const EdgeKey& e);

/// Explicit general form of a multiplex: coupling entries become inter-layer edges.
MultilayerNetwork to_multilayer(const MultiplexNetwork& net);

/// Restriction of a multiplex to the largest weakly connected component of the
/// aggregate graph (union of all layers), nodes renumbered in original order.
struct ComponentRestriction {
    MultiplexNetwork network;
    std::vector<int> original_ids;  // original 1-based id of each retained node
};
ComponentRestriction largest_component(const MultiplexNetwork& net);

} // namespace perron
