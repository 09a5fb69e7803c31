#include <benchmark/benchmark.h>

#include <vector>

#include "gbpp/classify.hpp"
#include "gbpp/eval.hpp"
#include "gbpp/granulation.hpp"
#include "gbpp/io.hpp"
#include "gbpp/rng.hpp"
#include "gbpp/synth.hpp"

using namespace gbpp;

namespace {

Dataset subsampled(int n, std::uint64_t seed) {
    const auto full = synth::make_svmguide1();
    std::vector<int> order(static_cast<size_t>(full.n()));
    for (int i = 0; i < full.n(); ++i) order[static_cast<size_t>(i)] = i;
    Engine rng(seed);
    rng.shuffle(order);
    order.resize(static_cast<size_t>(n));
    return fit_apply_minmax(subset(full, order)).train;
}

void BM_GranulateGbgPlusPlus(benchmark::State& state) {
    const auto ds = subsampled(static_cast<int>(state.range(0)), 11);
    GranulationConfig cfg;
    std::uint64_t evals = 0;
    for (auto _ : state) {
        auto result = granulate(ds, cfg);
        evals = result.counters.distance_evaluations;
        benchmark::DoNotOptimize(result);
    }
    state.counters["distance_evals"] = static_cast<double>(evals);
}
BENCHMARK(BM_GranulateGbgPlusPlus)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Arg(7089);

void BM_GranulateKmeansBaseline(benchmark::State& state) {
    const auto ds = subsampled(static_cast<int>(state.range(0)), 11);
    GranulationConfig cfg;
    cfg.method = GranulationMethod::KMeansBaseline;
    cfg.kmeans_seed = 7;
    std::uint64_t evals = 0;
    for (auto _ : state) {
        auto result = granulate_kmeans_baseline(ds, cfg);
        evals = result.counters.distance_evaluations;
        benchmark::DoNotOptimize(result);
    }
    state.counters["distance_evals"] = static_cast<double>(evals);
}
BENCHMARK(BM_GranulateKmeansBaseline)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Arg(7089);

void BM_PredictHarmonic(benchmark::State& state) {
    const auto ds = subsampled(4000, 11);
    GranulationConfig cfg;
    const auto clf =
        BallClassifier::from_result(granulate(ds, cfg), BallRule::HarmonicDistance);
    const std::vector<double> query{0.4, 0.6, 0.5, 0.2};
    for (auto _ : state) {
        auto pred = predict_gbknn_pp(clf, query);
        benchmark::DoNotOptimize(pred);
    }
}
BENCHMARK(BM_PredictHarmonic);

void BM_PredictPlainKnn(benchmark::State& state) {
    const auto ds = subsampled(4000, 11);
    const std::vector<double> query{0.4, 0.6, 0.5, 0.2};
    for (auto _ : state) {
        int label = predict_knn(ds, query, 5);
        benchmark::DoNotOptimize(label);
    }
}
BENCHMARK(BM_PredictPlainKnn);

}  // namespace

BENCHMARK_MAIN();
