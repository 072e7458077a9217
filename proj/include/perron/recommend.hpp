#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perron/eigensolver.hpp"
#include "perron/network.hpp"

namespace perron {

enum class CandidateSet { all, absent, existing };

/// How an edit treats the reverse entry of a directed network. mirrored
/// applies the same change to (j,l)->(i,k); for decrease and remove the
/// reverse is touched only if it exists. Undirected networks always mirror.
enum class Pairing { single, mirrored };

struct RankOptions {
    std::size_t top_k = 5;
    CandidateSet candidates = CandidateSet::all;
    /// Only existing intra-layer edges (the sparsity cone) are candidates.
    bool structured = false;
    /// Restrict to k == l. Always on for a multiplex.
    bool intra_only = false;
    bool exclude_self_loops = true;
    /// One entry per unordered pair {a, b}: the first direction in ranking
    /// order wins. Always on for undirected networks.
    bool unordered = false;
    /// Removals: skip edges whose removal breaks strong connectivity.
    bool require_connected = true;
    bool recompute = false;
    double eps = 0.3;  // insertion weight used by recompute
    Pairing pairing = Pairing::single;
    SolverOptions solver;
};

struct RankedEdge {
    EdgeKey edge;
    double score = 0.0;
    double rho_before = 0.0;
    std::optional<double> rho_after;
    std::optional<bool> connected_after;
};

/// Largest kappa * y_a * x_b over the candidate set, in descending order with
/// ties broken by (k, l, i, j). Walks a frontier over the sorted Perron
/// vectors instead of forming all (NL)^2 products.
std::vector<RankedEdge> rank_insertions(const Network& net, const PerronTriple& t,
                                        const RankOptions& options);

/// Existing editable edges in ascending score order (same tie rule). With
/// require_connected the scan is lazy: connectivity is checked only until
/// top_k feasible edges are found. Throws InfeasibleError when none is.
std::vector<RankedEdge> rank_removals(const Network& net, const PerronTriple& t,
                                      const RankOptions& options);

enum class Mode { increase, decrease, remove };

struct ExperimentEdge {
    EdgeKey edge;
    Pairing pairing = Pairing::single;
};

struct ExperimentOptions {
    double eps = 0.3;
    Mode mode = Mode::increase;
    /// Draw one seeded random baseline edge per row.
    bool baseline = true;
    std::uint64_t seed = 42;
    Pairing baseline_pairing = Pairing::single;
    SolverOptions solver;
    kernels::Exec exec = kernels::Exec::parallel;
};

struct ExperimentRow {
    EdgeKey edge;
    double score = 0.0;
    std::optional<double> rho_new;
    double rho_first_order = 0.0;  // rho + sum of delta * S over touched entries
    std::optional<bool> connected_after;
    std::string error;  // precondition or solver failure; row kept

    std::optional<EdgeKey> baseline_edge;
    double baseline_score = 0.0;
    std::optional<double> baseline_rho_new;
    std::string baseline_error;
};

/// Network after one experiment edit. Throws InputError when the edit is not
/// admissible (decrease by eps >= weight, removal of an absent edge, ...).
Network apply_perturbation(const Network& net, const EdgeKey& e, Mode mode, double eps,
                           Pairing pairing);

/// First-order root shift of that edit: sum of delta_e * S_e over touched entries.
double first_order_shift(const Network& net, const PerronTriple& t, const EdgeKey& e, Mode mode,
                         double eps, Pairing pairing);

/// Re-solves the Perron root for every edited network. Baselines are drawn
/// uniformly, without replacement, from the editable edges admissible for
/// the mode, using mt19937_64 seeded with options.seed.
std::vector<ExperimentRow> perturbation_experiment(const Network& net, const PerronTriple& t,
                                                   std::span<const ExperimentEdge> edges,
                                                   const ExperimentOptions& options);

} // namespace perron
