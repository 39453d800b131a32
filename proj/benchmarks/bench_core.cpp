#include "chemoswarm/agent.hpp"
#include "chemoswarm/cmaes.hpp"
#include "chemoswarm/episode.hpp"
#include "chemoswarm/metrics.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace chemo;

namespace {

Genome random_genome(std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::array<double, kGenomeSize> w{};
    for (double& x : w) x = n(rng);
    return Genome::from_weights(w);
}

void BM_Forward(benchmark::State& state) {
    const auto lw = decode(random_genome(1));
    SensorReadings s{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    ControllerState st;
    for (auto _ : state) {
        const auto r = forward(lw, s, st);
        st = r.state;
        benchmark::DoNotOptimize(r.command.v);
    }
}
BENCHMARK(BM_Forward);

void BM_SenseDisc(benchmark::State& state) {
    Rng rng(2);
    const auto field = init_spots(rng, 5, {600, 600}, SpotRanges{});
    std::uniform_real_distribution<double> u(0.0, 600.0);
    std::vector<Vec2> points(1024);
    for (auto& p : points) p = {u(rng), u(rng)};
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(field.sense_disc(points[i++ & 1023], 2.0));
    }
}
BENCHMARK(BM_SenseDisc);

void BM_InitSpots(benchmark::State& state) {
    const int extent = static_cast<int>(state.range(0));
    Rng rng(3);
    const auto ranges = SpotRanges::for_field({extent, extent});
    for (auto _ : state) {
        auto field = init_spots(rng, 5, {extent, extent}, ranges);
        benchmark::DoNotOptimize(field.amount(0, 0));
    }
}
BENCHMARK(BM_InitSpots)->Arg(150)->Arg(600)->Unit(benchmark::kMicrosecond);

void BM_SingleEpisode(benchmark::State& state) {
    auto cfg = EpisodeConfig::single_defaults();
    cfg.record_trace = false;
    const auto g = random_genome(4);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(run_single(g, cfg, rng).fitness.front());
    }
}
BENCHMARK(BM_SingleEpisode)->Unit(benchmark::kMillisecond);

void BM_MultiStep(benchmark::State& state) {
    auto cfg = EpisodeConfig::multi_defaults();
    cfg.steps = 10;
    cfg.n_agents = static_cast<int>(state.range(0));
    cfg.record_trace = false;
    const auto g = random_genome(5);
    for (auto _ : state) {
        Rng rng(6);
        benchmark::DoNotOptimize(run_multi(g, cfg, rng).fitness.front());
    }
    state.SetItemsProcessed(state.iterations() * cfg.steps * cfg.n_agents);
}
BENCHMARK(BM_MultiStep)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_InfoDecomposition(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> in(n * 6), out(n * 2);
    for (double& x : in) x = u(rng);
    for (double& x : out) x = u(rng);
    const auto di = discretize(in, 6);
    const auto dout = discretize(out, 2);
    for (auto _ : state) benchmark::DoNotOptimize(info_decomposition(di, dout).mi);
}
BENCHMARK(BM_InfoDecomposition)->Arg(1000)->Arg(5000);

void BM_CmaGeneration(benchmark::State& state) {
    CmaEs es(CmaParameters::standard(82, 100), Eigen::VectorXd::Zero(82), 0.1);
    Rng rng(8);
    for (auto _ : state) {
        const auto xs = es.ask(rng);
        std::vector<double> f;
        for (const auto& x : xs) f.push_back(-x.squaredNorm());
        es.tell(xs, f);
    }
}
BENCHMARK(BM_CmaGeneration)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
