#include "perron/recommend.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <tuple>
#include <utility>

#include "perron/errors.hpp"
#include "perron/sensitivity.hpp"

namespace perron {

namespace {

using kernels::Exec;

auto tie_key(const EdgeKey& e) { return std::tuple(e.k, e.l, e.i, e.j); }

bool intra_only(const Network& net, const RankOptions& o) {
    return o.intra_only || o.structured || std::holds_alternative<MultiplexNetwork>(net);
}

bool unordered(const Network& net, const RankOptions& o) { return o.unordered || !directed(net); }

// Unordered supra pair of an edge, for deduplication.
std::pair<std::size_t, std::size_t> pair_of(int n, const EdgeKey& e) {
    const auto [a, b] = supra_position(n, e);
    return std::minmax(a, b);
}

bool mirrors(const Network& net, const EdgeKey& e, Pairing pairing) {
    return pairing == Pairing::mirrored && directed(net) && !is_self_loop(e) &&
           !(e.i == e.j && std::holds_alternative<MultiplexNetwork>(net));
}

double solve_rho(const Network& net, const SolverOptions& solver, Exec exec) {
    return perron(SupraOperator(net, exec), solver).rho;
}

struct Scored {
    EdgeKey edge;
    double score;
};

// Sorted Perron-vector indices of one diagonal segment (or the whole vector).
struct Segment {
    std::vector<std::size_t> rows;  // by y descending
    std::vector<std::size_t> cols;  // by x descending
};

std::vector<std::size_t> sorted_desc(const Vector& v, std::size_t first, std::size_t count) {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), first);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
}

struct Frontier {
    double product;
    std::size_t seg;
    std::size_t p;
    std::size_t q;
    bool operator<(const Frontier& o) const { return product < o.product; }
};

std::vector<Scored> insertion_frontier(const Network& net, const PerronTriple& t,
                                       const RankOptions& o) {
    const int n = nodes(net);
    const auto nn = static_cast<std::size_t>(n);
    const bool intra = intra_only(net, o);
    const bool dedupe = unordered(net, o);

    std::vector<Segment> segs;
    if (intra) {
        for (int l = 0; l < layers(net); ++l) {
            const auto first = nn * static_cast<std::size_t>(l);
            segs.push_back({sorted_desc(t.y, first, nn), sorted_desc(t.x, first, nn)});
        }
    } else {
        segs.push_back({sorted_desc(t.y, 0, t.y.size()), sorted_desc(t.x, 0, t.x.size())});
    }

    std::priority_queue<Frontier> heap;
    auto push = [&](std::size_t s, std::size_t p, std::size_t q) {
        const auto& seg = segs[s];
        heap.push({t.y[seg.rows[p]] * t.x[seg.cols[q]], s, p, q});
    };
    for (std::size_t s = 0; s < segs.size(); ++s) {
        for (std::size_t p = 0; p < segs[s].rows.size(); ++p) {
            push(s, p, 0);
        }
    }

    std::vector<Scored> out;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<Scored> batch;
    while (!heap.empty() && out.size() < o.top_k) {
        // Scores are monotone in the product, so equal scores pop consecutively.
        const double score = t.kappa * heap.top().product;
        batch.clear();
        while (!heap.empty() && t.kappa * heap.top().product == score) {
            const auto f = heap.top();
            heap.pop();
            const auto& seg = segs[f.seg];
            batch.push_back({edge_at(n, seg.rows[f.p], seg.cols[f.q]), score});
            if (f.q + 1 < seg.cols.size()) {
                push(f.seg, f.p, f.q + 1);
            }
        }
        std::sort(batch.begin(), batch.end(),
                  [](const Scored& a, const Scored& b) { return tie_key(a.edge) < tie_key(b.edge); });
        for (const auto& c : batch) {
            if (o.exclude_self_loops && is_self_loop(c.edge)) {
                continue;
            }
            if (std::holds_alternative<MultiplexNetwork>(net) && c.edge.i == c.edge.j) {
                continue;  // multiplex layers carry no self-loops
            }
            if (o.candidates == CandidateSet::absent && weight(net, c.edge) != 0.0) {
                continue;
            }
            if (dedupe && !seen.insert(pair_of(n, c.edge)).second) {
                continue;
            }
            out.push_back(c);
            if (out.size() == o.top_k) {
                break;
            }
        }
    }
    return out;
}

// Editable existing edges passing the filters, sorted by score (descending
// or ascending) then tie key, deduplicated when unordered.
std::vector<Scored> existing_sorted(const Network& net, const PerronTriple& t,
                                    const RankOptions& o, bool descending) {
    const int n = nodes(net);
    const bool intra = intra_only(net, o);
    std::vector<Scored> all;
    for (const auto& we : editable_edges(net)) {
        if (intra && we.key.k != we.key.l) {
            continue;
        }
        if (o.exclude_self_loops && is_self_loop(we.key)) {
            continue;
        }
        all.push_back({we.key, sensitivity_entry(t, n, we.key)});
    }
    std::sort(all.begin(), all.end(), [&](const Scored& a, const Scored& b) {
        if (a.score != b.score) {
            return descending ? a.score > b.score : a.score < b.score;
        }
        return tie_key(a.edge) < tie_key(b.edge);
    });
    if (unordered(net, o)) {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        std::erase_if(all, [&](const Scored& s) { return !seen.insert(pair_of(n, s.edge)).second; });
    }
    return all;
}

} // namespace

// ---------------------------------------------------------------------------

std::vector<RankedEdge> rank_insertions(const Network& net, const PerronTriple& t,
                                        const RankOptions& options) {
    if (options.top_k < 1) {
        throw InputError("top-k must be at least 1");
    }
    std::vector<Scored> picked;
    if (options.structured || options.candidates == CandidateSet::existing) {
        picked = existing_sorted(net, t, options, true);
        if (picked.size() > options.top_k) {
            picked.resize(options.top_k);
        }
    } else {
        picked = insertion_frontier(net, t, options);
    }

    std::vector<RankedEdge> out;
    out.reserve(picked.size());
    for (const auto& s : picked) {
        RankedEdge r{s.edge, s.score, t.rho, std::nullopt, std::nullopt};
        if (options.recompute) {
            const auto next =
                apply_perturbation(net, s.edge, Mode::increase, options.eps, options.pairing);
            r.rho_after = perron(next, options.solver).rho;
        }
        out.push_back(r);
    }
    return out;
}

std::vector<RankedEdge> rank_removals(const Network& net, const PerronTriple& t,
                                      const RankOptions& options) {
    if (options.top_k < 1) {
        throw InputError("top-k must be at least 1");
    }
    const auto candidates = existing_sorted(net, t, options, false);
    if (candidates.empty()) {
        throw InfeasibleError("network has no removable edge");
    }
    std::vector<RankedEdge> out;
    for (const auto& s : candidates) {
        if (out.size() == options.top_k) {
            break;
        }
        // Only the lazy scan needs the edited network; scores alone suffice otherwise.
        if (!options.require_connected && !options.recompute) {
            out.push_back({s.edge, s.score, t.rho, std::nullopt, std::nullopt});
            continue;
        }
        const auto next = apply_perturbation(net, s.edge, Mode::remove, 0.0, options.pairing);
        std::optional<bool> connected;
        if (options.require_connected || options.recompute) {
            connected = is_strongly_connected(next);
        }
        if (options.require_connected && !*connected) {
            continue;
        }
        RankedEdge r{s.edge, s.score, t.rho, std::nullopt, connected};
        if (options.recompute) {
            try {
                r.rho_after = perron(next, options.solver).rho;
            } catch (const NumericalError&) {
                if (*connected) {
                    throw;
                }
                // A disconnected remainder may have no positive Perron pair.
            }
        }
        out.push_back(r);
    }
    if (out.empty()) {
        throw InfeasibleError("every candidate removal breaks strong connectivity");
    }
    return out;
}

// ---------------------------------------------------------------------------

Network apply_perturbation(const Network& net, const EdgeKey& e, Mode mode, double eps,
                           Pairing pairing) {
    check_edge(net, e);
    const bool mirror = mirrors(net, e, pairing);
    const auto rev = reversed(e);
    switch (mode) {
    case Mode::increase: {
        if (!(eps > 0.0)) {
            throw InputError("epsilon must be positive");
        }
        auto next = apply_edge_delta(net, e, eps);
        return mirror ? apply_edge_delta(next, rev, eps) : next;
    }
    case Mode::decrease: {
        if (!(eps > 0.0)) {
            throw InputError("epsilon must be positive");
        }
        auto shrink = [eps](const Network& g, const EdgeKey& x) {
            const double w = weight(g, x);
            if (!(eps < w)) {
                throw InputError("decrease needs epsilon below the edge weight");
            }
            return apply_edge_delta(g, x, -eps);
        };
        if (weight(net, e) == 0.0) {
            throw InputError("edge does not exist");
        }
        auto next = shrink(net, e);
        return mirror && weight(net, rev) != 0.0 ? shrink(next, rev) : next;
    }
    case Mode::remove: {
        auto next = remove_edge(net, e);
        return mirror && weight(net, rev) != 0.0 ? remove_edge(next, rev) : next;
    }
    }
    return net;
}

double first_order_shift(const Network& net, const PerronTriple& t, const EdgeKey& e, Mode mode,
                         double eps, Pairing pairing) {
    check_edge(net, e);
    const int n = nodes(net);
    std::vector<EdgeKey> touched{e};
    const auto rev = reversed(e);
    if (!is_self_loop(e) && (!directed(net) || (mirrors(net, e, pairing) &&
                                                (mode == Mode::increase || weight(net, rev) != 0.0)))) {
        touched.push_back(rev);
    }
    double shift = 0.0;
    for (const auto& x : touched) {
        const double delta = mode == Mode::increase   ? eps
                             : mode == Mode::decrease ? -eps
                                                      : -weight(net, x);
        shift += delta * sensitivity_entry(t, n, x);
    }
    return shift;
}

std::vector<ExperimentRow> perturbation_experiment(const Network& net, const PerronTriple& t,
                                                   std::span<const ExperimentEdge> edges,
                                                   const ExperimentOptions& options) {
    if (!(options.eps > 0.0)) {
        throw InputError("epsilon must be positive");
    }
    const int n = nodes(net);
    std::vector<ExperimentRow> rows(edges.size());

    if (options.baseline) {
        std::vector<EdgeKey> pool;
        for (const auto& we : editable_edges(net)) {
            const auto [a, b] = supra_position(n, we.key);
            if (!directed(net) && a > b) {
                continue;
            }
            if (options.mode == Mode::decrease && !(options.eps < we.weight)) {
                continue;
            }
            pool.push_back(we.key);
        }
        std::mt19937_64 rng(options.seed);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r >= pool.size()) {
                rows[r].baseline_error = "no baseline edge left";
                continue;
            }
            std::uniform_int_distribution<std::size_t> pick(r, pool.size() - 1);
            std::swap(pool[r], pool[pick(rng)]);
            rows[r].baseline_edge = pool[r];
        }
    }

    const auto run = [&](const EdgeKey& e, Pairing pairing, std::optional<double>& rho_new,
                         std::optional<bool>* connected, std::string& error) {
        try {
            const auto next = apply_perturbation(net, e, options.mode, options.eps, pairing);
            if (connected) {
                *connected = is_strongly_connected(next);
            }
            rho_new = solve_rho(next, options.solver, options.exec);
        } catch (const std::exception& ex) {
            error = ex.what();
        }
    };

    const auto tasks = static_cast<long>(2 * rows.size());
    const bool parallel = options.exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long task = 0; task < tasks; ++task) {
        auto& row = rows[static_cast<std::size_t>(task / 2)];
        const auto& spec = edges[static_cast<std::size_t>(task / 2)];
        if (task % 2 == 0) {
            row.edge = spec.edge;
            try {
                check_edge(net, spec.edge);
                row.score = sensitivity_entry(t, n, spec.edge);
                row.rho_first_order = t.rho + first_order_shift(net, t, spec.edge, options.mode,
                                                                 options.eps, spec.pairing);
            } catch (const std::exception& ex) {
                row.error = ex.what();
                continue;
            }
            run(spec.edge, spec.pairing, row.rho_new,
                options.mode == Mode::remove ? &row.connected_after : nullptr, row.error);
        } else if (row.baseline_edge) {
            row.baseline_score = sensitivity_entry(t, n, *row.baseline_edge);
            run(*row.baseline_edge, options.baseline_pairing, row.baseline_rho_new, nullptr,
                row.baseline_error);
        }
    }
    return rows;
}

} // namespace perron
