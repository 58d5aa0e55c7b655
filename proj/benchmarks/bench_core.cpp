#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "semmap/lhs.hpp"
#include "semmap/metrics.hpp"
#include "semmap/olarfdssom.hpp"
#include "semmap/rng.hpp"
#include "semmap/topo_map.hpp"

using namespace semmap;

namespace {

void BM_ProcessSample(benchmark::State& state) {
    SemmapConfig cfg;
    cfg.n_objects = 18;
    std::mt19937_64 gen(1);
    std::vector<std::pair<PositionSample, ObjectEvidence>> inputs;
    for (int i = 0; i < 4096; ++i) {
        ObjectEvidence r(18);
        for (auto& v : r) v = uniform01(gen);
        inputs.push_back({{uniform_in(gen, 0, 20), uniform_in(gen, 0, 20)}, std::move(r)});
    }
    TopoMap map;
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [p, r] = inputs[i++ & 4095];
        benchmark::DoNotOptimize(process_sample(map, p, r, cfg));
    }
    state.SetItemsProcessed(state.iterations());
    state.counters["nodes"] = static_cast<double>(map.nodes.size());
}
BENCHMARK(BM_ProcessSample);

void BM_SomTrain(benchmark::State& state) {
    OlarfdssomConfig cfg;
    std::mt19937_64 gen(2);
    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 4096; ++i) {
        std::vector<double> x(18);
        for (auto& v : x) v = uniform01(gen);
        inputs.push_back(std::move(x));
    }
    SomMap map;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(map, inputs[i++ & 4095], cfg));
    }
    state.SetItemsProcessed(state.iterations());
    state.counters["nodes"] = static_cast<double>(map.nodes.size());
}
BENCHMARK(BM_SomTrain);

void BM_SomCluster(benchmark::State& state) {
    OlarfdssomConfig cfg;
    std::mt19937_64 gen(3);
    SomMap map;
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> x(18);
        for (auto& v : x) v = uniform01(gen);
        train(map, x, cfg);
    }
    std::vector<double> probe(18);
    for (auto& v : probe) v = uniform01(gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cluster(map, probe, cfg.epsilon));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SomCluster);

void BM_MatchingWeight(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 gen(4);
    std::vector<std::vector<long>> counts(static_cast<std::size_t>(n),
                                          std::vector<long>(static_cast<std::size_t>(n)));
    for (auto& row : counts)
        for (auto& v : row) v = static_cast<long>(gen() % 100);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_matching_weight(counts));
    }
}
BENCHMARK(BM_MatchingWeight)->Arg(8)->Arg(20)->Arg(40);

void BM_LhsSample(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lhs_sample(search_ranges(), k, seed++));
    }
}
BENCHMARK(BM_LhsSample)->Arg(16)->Arg(100);

} // namespace

BENCHMARK_MAIN();
