#include <benchmark/benchmark.h>

#include "survival/em_planner.hpp"
#include "survival/experiment.hpp"
#include "survival/gridworld.hpp"
#include "survival/sarsa.hpp"
#include "survival/survival_math.hpp"

namespace {

using namespace survival;

void BM_GridStep(benchmark::State& state) {
    Rng rng = derive_stream(1, StreamKind::Test, 0);
    grid::GridState s = grid::reset(rng);
    s.battery = 90.0;
    int a = 0;
    for (auto _ : state) {
        auto out = grid::step(s, static_cast<grid::Action>(a), rng);
        benchmark::DoNotOptimize(out);
        a = (a + 1) % grid::kNumActions;
    }
}
BENCHMARK(BM_GridStep);

void BM_SarsaUpdate(benchmark::State& state) {
    QTable q;
    TraceTable traces;
    SarsaParams params;
    grid::ObsIndex obs = 0;
    for (auto _ : state) {
        const grid::ObsIndex next = (obs + 7919) % grid::kNumObservations;
        update(q, traces, obs, grid::Action::Up, -0.01, next, grid::Action::Eat, false, params);
        obs = next;
    }
    benchmark::DoNotOptimize(q);
}
BENCHMARK(BM_SarsaUpdate);

void BM_TrainingEpisode(benchmark::State& state) {
    QTable q;
    TraceTable traces;
    SarsaParams params;
    SarsaLearner learner{q, traces, params};
    const ActionSelector select = [&q](grid::ObsIndex obs, Rng& rng) { return select_action(q, obs, 0.01, rng); };
    std::uint64_t episode = 0;
    for (auto _ : state) {
        Rng rng = derive_stream(1, StreamKind::Training, episode++);
        benchmark::DoNotOptimize(run_episode(select, rng, 10000, &learner));
    }
}
BENCHMARK(BM_TrainingEpisode);

void BM_SurvivalProbRecursion(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto horizon = static_cast<std::size_t>(state.range(0));
    const FiniteMdp model = fixtures::random_mdp(16, 4, rng);
    const auto pi = fixtures::random_policy(16, 4, horizon, rng);
    for (auto _ : state) benchmark::DoNotOptimize(log_multi_step_survival_prob(model, pi, horizon));
}
BENCHMARK(BM_SurvivalProbRecursion)->Arg(10)->Arg(50);

void BM_EnumerationOracle(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto horizon = static_cast<std::size_t>(state.range(0));
    const FiniteMdp model = fixtures::random_mdp(3, 2, rng);
    const auto pi = fixtures::random_policy(3, 2, horizon, rng);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_trajectories(model, pi, horizon));
}
BENCHMARK(BM_EnumerationOracle)->Arg(4)->Arg(6);

void BM_EmIteration(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const FiniteMdp model = fixtures::random_mdp(16, 4, rng);
    auto pi = fixtures::random_policy(16, 4, 20, rng);
    for (auto _ : state) {
        pi = m_step(e_step(model, pi, 20));
        benchmark::DoNotOptimize(pi);
    }
}
BENCHMARK(BM_EmIteration);

}  // namespace

BENCHMARK_MAIN();
