#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "perron/errors.hpp"
#include "perron/recommend.hpp"
#include "perron/sensitivity.hpp"

using namespace perron;

namespace {

struct Candidate {
    EdgeKey e;
    double s;
};

// Exhaustive reference: every (a, b) product, filtered and sorted.
std::vector<EdgeKey> brute_insertions(const Network& g, const PerronTriple& t, const RankOptions& o) {
    const int n = nodes(g);
    const bool multiplex = std::holds_alternative<MultiplexNetwork>(g);
    std::vector<Candidate> all;
    for (std::size_t a = 0; a < supra_dim(g); ++a) {
        for (std::size_t b = 0; b < supra_dim(g); ++b) {
            const auto e = edge_at(n, a, b);
            if ((multiplex || o.intra_only) && e.k != e.l) {
                continue;
            }
            if ((o.exclude_self_loops || multiplex) && is_self_loop(e)) {
                continue;
            }
            if (o.candidates == CandidateSet::absent && weight(g, e) != 0.0) {
                continue;
            }
            all.push_back({e, t.kappa * (t.y[a] * t.x[b])});
        }
    }
    std::sort(all.begin(), all.end(), [](const Candidate& p, const Candidate& q) {
        if (p.s != q.s) {
            return p.s > q.s;
        }
        return std::tie(p.e.k, p.e.l, p.e.i, p.e.j) < std::tie(q.e.k, q.e.l, q.e.i, q.e.j);
    });
    std::vector<EdgeKey> out;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& c : all) {
        const auto [a, b] = supra_position(n, c.e);
        if ((o.unordered || !directed(g)) && !seen.insert(std::minmax(a, b)).second) {
            continue;
        }
        out.push_back(c.e);
        if (out.size() == o.top_k) {
            break;
        }
    }
    return out;
}

std::vector<EdgeKey> brute_removals(const Network& g, const PerronTriple& t, const RankOptions& o) {
    const int n = nodes(g);
    std::vector<Candidate> all;
    for (const auto& we : editable_edges(g)) {
        all.push_back({we.key, sensitivity_entry(t, n, we.key)});
    }
    std::sort(all.begin(), all.end(), [](const Candidate& p, const Candidate& q) {
        if (p.s != q.s) {
            return p.s < q.s;
        }
        return std::tie(p.e.k, p.e.l, p.e.i, p.e.j) < std::tie(q.e.k, q.e.l, q.e.i, q.e.j);
    });
    std::vector<EdgeKey> out;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& c : all) {
        const auto [a, b] = supra_position(n, c.e);
        if (!directed(g) && !seen.insert(std::minmax(a, b)).second) {
            continue;
        }
        if (o.require_connected && !is_strongly_connected(remove_edge(g, c.e))) {
            continue;
        }
        out.push_back(c.e);
        if (out.size() == o.top_k) {
            break;
        }
    }
    return out;
}

std::vector<EdgeKey> keys(const std::vector<RankedEdge>& r) {
    std::vector<EdgeKey> out;
    for (const auto& e : r) {
        out.push_back(e.edge);
    }
    return out;
}

} // namespace

TEST_CASE("frontier ranking equals exhaustive enumeration") {
    std::mt19937_64 rng(83);
    for (int rep = 0; rep < 24; ++rep) {
        const bool directed = rep % 3 != 0;
        const Network g = rep % 2 ? Network{testing::random_multiplex(rng, 5, 3, 0.3, 0.7, directed)}
                                  : Network{testing::random_multilayer(rng, 4, 3, 0.15, directed)};
        const auto t = perron::perron(g);
        RankOptions o;
        o.top_k = 1 + static_cast<std::size_t>(rep % 9);
        o.candidates = rep % 4 == 1 ? CandidateSet::absent : CandidateSet::all;
        o.unordered = rep % 5 == 0;
        o.intra_only = rep % 7 == 0;
        o.exclude_self_loops = rep % 2 == 0;
        CHECK(keys(rank_insertions(g, t, o)) == brute_insertions(g, t, o));
    }
}

TEST_CASE("ties are broken by layer pair then node pair") {
    // Every node of a complete symmetric layer has the same Perron entry.
    std::vector<WeightedEdge> edges;
    for (int i = 1; i <= 4; ++i) {
        for (int j = i + 1; j <= 4; ++j) {
            edges.push_back({{i, j, 1, 1}, 1.0});
            edges.push_back({{i, j, 2, 2}, 1.0});
        }
    }
    const Network g = MultiplexNetwork(4, 2, edges, 1.0, false);
    const auto t = perron::perron(g);
    RankOptions o;
    o.top_k = 30;
    const auto r = keys(rank_insertions(g, t, o));
    CHECK(r == brute_insertions(g, t, o));
    CHECK(r.front() == EdgeKey{1, 2, 1, 1});
}

TEST_CASE("removal scan equals the exhaustive sorted scan") {
    std::mt19937_64 rng(89);
    for (int rep = 0; rep < 16; ++rep) {
        const bool directed = rep % 2 == 0;
        const Network g = rep % 4 < 2 ? Network{testing::random_multiplex(rng, 5, 2, 0.4, 0.5, directed)}
                                      : Network{testing::random_multilayer(rng, 4, 2, 0.3, directed)};
        const auto t = perron::perron(g);
        RankOptions o;
        o.top_k = 1 + static_cast<std::size_t>(rep % 6);
        o.require_connected = rep % 3 != 0;
        const auto got = rank_removals(g, t, o);
        CHECK(keys(got) == brute_removals(g, t, o));
        for (std::size_t p = 1; p < got.size(); ++p) {
            CHECK(got[p - 1].score <= got[p].score);
        }
    }
}

TEST_CASE("top insertion pairs the largest y with the largest x and stays below kappa") {
    std::mt19937_64 rng(97);
    const Network g = testing::random_multilayer(rng, 6, 3, 0.2, true);
    const auto t = perron::perron(g);
    RankOptions o;
    o.top_k = 1;
    o.exclude_self_loops = false;
    const auto top = rank_insertions(g, t, o).front();
    const auto a = static_cast<std::size_t>(std::max_element(t.y.begin(), t.y.end()) - t.y.begin());
    const auto b = static_cast<std::size_t>(std::max_element(t.x.begin(), t.x.end()) - t.x.begin());
    CHECK(supra_position(nodes(g), top.edge).row == a);
    CHECK(supra_position(nodes(g), top.edge).col == b);
    CHECK(top.score < t.kappa);
}

TEST_CASE("no feasible removal on a single 2-cycle") {
    const Network g = MultilayerNetwork(2, 1, std::vector<WeightedEdge>{{{1, 2, 1, 1}, 1.0}}, false);
    const auto t = perron::perron(g);
    RankOptions o;
    CHECK_THROWS_AS(rank_removals(g, t, o), InfeasibleError);
    o.require_connected = false;
    CHECK(rank_removals(g, t, o).size() == 1);
}

TEST_CASE("recomputed roots move in the direction of the edit") {
    std::mt19937_64 rng(101);
    const Network g = testing::random_multiplex(rng, 8, 3, 0.3, 1.0, true);
    const auto t = perron::perron(g);
    RankOptions o;
    o.recompute = true;
    for (const auto& r : rank_insertions(g, t, o)) {
        CHECK(*r.rho_after >= t.rho);
    }
    for (const auto& r : rank_removals(g, t, o)) {
        CHECK(*r.rho_after <= t.rho);
        CHECK(*r.connected_after);
    }
}

TEST_CASE("experiments: monotone roots, flagged rows, deterministic baselines") {
    std::mt19937_64 rng(103);
    const Network g = testing::random_multiplex(rng, 9, 3, 0.35, 1.0, true);
    const auto t = perron::perron(g);
    const auto existing = editable_edges(g);
    std::vector<ExperimentEdge> edges;
    for (std::size_t p = 0; p < 6; ++p) {
        edges.push_back({existing[p * 3].key, p % 2 ? Pairing::mirrored : Pairing::single});
    }
    for (Mode mode : {Mode::increase, Mode::decrease, Mode::remove}) {
        ExperimentOptions o;
        o.mode = mode;
        o.eps = 0.3;
        const auto rows = perturbation_experiment(g, t, edges, o);
        REQUIRE(rows.size() == edges.size());
        for (const auto& row : rows) {
            if (!row.error.empty()) {
                continue;
            }
            REQUIRE(row.rho_new.has_value());
            if (mode == Mode::increase) {
                CHECK(*row.rho_new >= t.rho);
            } else {
                CHECK(*row.rho_new <= t.rho + 1e-12);
            }
            REQUIRE(row.baseline_edge.has_value());
        }
        o.exec = kernels::Exec::serial;
        const auto again = perturbation_experiment(g, t, edges, o);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            CHECK(again[r].baseline_edge == rows[r].baseline_edge);
            CHECK(again[r].rho_new == rows[r].rho_new);
            CHECK(again[r].baseline_rho_new == rows[r].baseline_rho_new);
        }
        o.seed = 7;
        const auto other = perturbation_experiment(g, t, edges, o);
        bool differs = false;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            differs |= other[r].baseline_edge != rows[r].baseline_edge;
        }
        CHECK(differs);
    }

    ExperimentOptions big;
    big.mode = Mode::decrease;
    big.eps = 5.0;
    const auto flagged = perturbation_experiment(g, t, edges, big);
    for (const auto& row : flagged) {
        CHECK_FALSE(row.error.empty());
        CHECK_FALSE(row.rho_new.has_value());
    }
}

TEST_CASE("mirrored edits touch the reverse entry") {
    const Network g{testing::example1()};
    const EdgeKey e{1, 2, 2, 1};
    const auto single = apply_perturbation(g, e, Mode::increase, 0.3, Pairing::single);
    const auto both = apply_perturbation(g, e, Mode::increase, 0.3, Pairing::mirrored);
    CHECK(weight(single, reversed(e)) == weight(g, reversed(e)));
    CHECK(weight(both, reversed(e)) == doctest::Approx(weight(g, reversed(e)) + 0.3));
    // (3,3)->(4,3) has no reverse; mirrored removal leaves the absent entry alone.
    const auto removed = apply_perturbation(g, {3, 4, 3, 3}, Mode::remove, 0.0, Pairing::mirrored);
    CHECK(weight(removed, {3, 4, 3, 3}) == 0.0);
    CHECK_THROWS_AS(apply_perturbation(g, {1, 4, 1, 1}, Mode::decrease, 1.0, Pairing::single), InputError);
    const auto t = perron::perron(g);
    CHECK(first_order_shift(g, t, e, Mode::increase, 0.3, Pairing::mirrored) ==
          doctest::Approx(0.3 * (sensitivity_entry(t, 4, e) + sensitivity_entry(t, 4, reversed(e)))));
}

TEST_CASE("example network ranking and recomputed roots") {
    const Network g{testing::example1()};
    const auto t = perron::perron(g);
    RankOptions o;
    o.top_k = 4;
    o.unordered = true;
    o.pairing = Pairing::mirrored;
    o.recompute = true;
    const auto r = rank_insertions(g, t, o);
    const double scores[] = {0.2241, 0.1725, 0.1717, 0.1694};
    const double roots[] = {2.4903, 2.4592, 2.4593, 2.4627};
    REQUIRE(r.size() == 4);
    for (std::size_t p = 0; p < 4; ++p) {
        CHECK(std::abs(r[p].score - scores[p]) <= 1e-3);
        CHECK(std::abs(*r[p].rho_after - roots[p]) <= 1e-3);
    }
}
