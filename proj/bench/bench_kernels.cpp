// Serial vs OpenMP kernels on random sparse layers, and a full Perron solve.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <tuple>
#include <vector>

#include "perron/eigensolver.hpp"
#include "perron/kernels.hpp"
#include "perron/network.hpp"
#include "perron/operator.hpp"

using namespace perron;

namespace {

// Directed cycle plus `degree` random out-edges per node in every layer.
MultiplexNetwork random_network(int n, int layers, int degree) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> node(1, n);
    std::vector<WeightedEdge> edges;
    for (int l = 1; l <= layers; ++l) {
        std::vector<std::vector<char>> used(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) {
            const int next = i % n + 1;
            edges.push_back({{i, next, l, l}, 1.0});
            for (int d = 0; d < degree; ++d) {
                const int j = node(rng);
                if (j != i && j != next) {
                    edges.push_back({{i, j, l, l}, 1.0});
                }
            }
        }
    }
    // Drop repeated (i, j, l) draws.
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::tie(a.key.k, a.key.i, a.key.j) < std::tie(b.key.k, b.key.i, b.key.j);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const WeightedEdge& a, const WeightedEdge& b) { return a.key == b.key; }),
                edges.end());
    return MultiplexNetwork(n, layers, edges, 1.0, true);
}

kernels::Exec exec_of(const benchmark::State& state) {
    return state.range(1) ? kernels::Exec::parallel : kernels::Exec::serial;
}

void BM_spmv(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const auto net = random_network(n, 1, 8);
    const auto& a = net.layer(1);
    std::vector<double> in(static_cast<std::size_t>(n), 1.0);
    std::vector<double> out(in.size());
    for (auto _ : state) {
        kernels::spmv(exec_of(state), a, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

void BM_coupling(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const int layers = 16;
    std::vector<double> in(static_cast<std::size_t>(n) * layers, 1.0);
    std::vector<double> out(in.size(), 0.0);
    for (auto _ : state) {
        kernels::add_uniform_coupling(exec_of(state), n, layers, 1.0, in, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_supra_apply(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const Network net{random_network(n, 8, 6)};
    const SupraOperator op(net, exec_of(state));
    std::vector<double> in(op.dim(), 1.0);
    std::vector<double> out(op.dim());
    for (auto _ : state) {
        op.apply(in, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_perron(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const Network net{random_network(n, 8, 4)};
    const SupraOperator op(net, exec_of(state));
    for (auto _ : state) {
        benchmark::DoNotOptimize(perron::perron(op).rho);
    }
}

} // namespace

BENCHMARK(BM_spmv)->ArgsProduct({{1 << 12, 1 << 16, 1 << 18}, {0, 1}});
BENCHMARK(BM_coupling)->ArgsProduct({{1 << 12, 1 << 16}, {0, 1}});
BENCHMARK(BM_supra_apply)->ArgsProduct({{1 << 10, 1 << 14}, {0, 1}});
BENCHMARK(BM_perron)->ArgsProduct({{1 << 10, 1 << 12}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
