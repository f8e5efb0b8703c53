#include <benchmark/benchmark.h>

#include "blind_stbc/channel.hpp"
#include "blind_stbc/constellation.hpp"
#include "blind_stbc/detect.hpp"
#include "blind_stbc/harness.hpp"

using namespace blind_stbc;

namespace {

ReceivedSignal make_burst(Modulation m, std::size_t blocks, double snr_db, std::uint64_t seed) {
    const auto& c = Constellation::get(m);
    RngStream rng(seed);
    const ChannelRealization channel(draw_channel(rng), db_to_linear(snr_db), 1.0);
    return transmit(random_symbol_matrix(blocks, c, rng), channel, rng);
}

}  // namespace

static void SolveNormalEq(benchmark::State& state) {
    RngStream rng(3);
    const auto a = draw_noise(4, 2, 1.0, rng);
    const auto b = draw_noise(4, static_cast<std::size_t>(state.range(0)), 1.0, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_normal_eq(a, b));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(SolveNormalEq)->RangeMultiplier(2)->Range(8, 256)->Complexity();

static void SingleIls(benchmark::State& state) {
    const auto& c = Constellation::get(Modulation::bpsk);
    const auto blocks = static_cast<std::size_t>(state.range(0));
    const auto rx = make_burst(Modulation::bpsk, blocks, 8.0, 11);
    RngStream rng(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ils(rx, c, random_symbol_matrix(blocks, c, rng), 50));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(SingleIls)->RangeMultiplier(2)->Range(10, 160)->Complexity();

static void Eils(benchmark::State& state) {
    const auto m = static_cast<Modulation>(state.range(0));
    const auto& c = Constellation::get(m);
    const auto rx = make_burst(m, 20, 10.0, 13);
    EilsConfig cfg;
    cfg.majority_threshold = m == Modulation::bpsk ? 2 : 4;
    RngStream rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eils(rx, c, cfg, rng));
    }
}
BENCHMARK(Eils)->Arg(static_cast<int>(Modulation::bpsk))->Arg(static_cast<int>(Modulation::qpsk));

static void ExhaustiveLs(benchmark::State& state) {
    const auto& c = Constellation::get(Modulation::bpsk);
    const auto rx = make_burst(Modulation::bpsk, static_cast<std::size_t>(state.range(0)), 10.0, 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exhaustive_ls(rx, c));
    }
}
BENCHMARK(ExhaustiveLs)->DenseRange(2, 6);

static void TrialAllDetectors(benchmark::State& state) {
    SweepConfig cfg;
    cfg.trials = 1;
    std::uint64_t t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trial(cfg, 8.0, t++));
    }
}
BENCHMARK(TrialAllDetectors);

BENCHMARK_MAIN();
