#include <benchmark/benchmark.h>

#include <vector>

#include "netfit/calibration.hpp"
#include "netfit/generators.hpp"
#include "netfit/metrics.hpp"
#include "netfit/rng.hpp"
#include "netfit/stats.hpp"

using namespace netfit;

namespace {

Graph corpus_graph(int n) { return generate_ff(n, 0.35, 2024); }

void BM_MetricVector(benchmark::State& state) {
    Graph g = corpus_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(metric_vector(g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MetricVector)->Range(128, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Betweenness(benchmark::State& state) {
    Graph g = corpus_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(brandes_betweenness(g));
}
BENCHMARK(BM_Betweenness)->Range(128, 4096)->Unit(benchmark::kMillisecond);

void BM_GenerateCba(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_cba(static_cast<int>(state.range(0)), 3, 0.5, ++seed));
}
BENCHMARK(BM_GenerateCba)->Range(256, 8192)->Unit(benchmark::kMicrosecond);

void BM_GenerateFf(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_ff(static_cast<int>(state.range(0)), 0.35, ++seed));
}
BENCHMARK(BM_GenerateFf)->Range(256, 8192)->Unit(benchmark::kMicrosecond);

void BM_Construct2k(benchmark::State& state) {
    Graph g = corpus_graph(static_cast<int>(state.range(0)));
    auto jdm = extract_jdm(g);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(construct_2k(jdm, ++seed));
}
BENCHMARK(BM_Construct2k)->Range(256, 4096)->Unit(benchmark::kMicrosecond);

void BM_SbmFit(benchmark::State& state) {
    Graph g = corpus_graph(1024);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_sbm_partition(g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SbmFit)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Spearman(benchmark::State& state) {
    Rng rng(7);
    std::vector<double> x(state.range(0)), y(state.range(0));
    for (auto& v : x) v = static_cast<double>(rng.below(50));
    for (auto& v : y) v = static_cast<double>(rng.below(50));
    for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y));
}
BENCHMARK(BM_Spearman)->Range(64, 4096)->Unit(benchmark::kMicrosecond);

void BM_Canberra(benchmark::State& state) {
    Rng rng(9);
    std::vector<double> x(64), y(64);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : y) v = rng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(canberra(x, y));
}
BENCHMARK(BM_Canberra);

}  // namespace

BENCHMARK_MAIN();
