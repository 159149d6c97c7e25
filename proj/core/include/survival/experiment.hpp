#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "survival/gridworld.hpp"
#include "survival/rng.hpp"
#include "survival/sarsa.hpp"

namespace survival {

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    std::int64_t n_train_episodes = 50000;
    std::int64_t eval_every = 1000;
    std::int64_t eval_episodes = 1000;
    std::int64_t episode_cap = 10000;
    SarsaParams sarsa;
    bool greedy_eval = false;           // evaluate with epsilon = 0 instead of sarsa.epsilon
    std::filesystem::path output_dir;  // empty: keep results in memory only
};

/// Throws std::invalid_argument naming the first offending field.
void validate(const ExperimentConfig& config);

struct EpisodeResult {
    std::int64_t survival_steps = 0;          // alive draws before the first death
    std::optional<double> battery_at_death;  // battery of the state whose draw failed
    int food_eaten = 0;
    int poison_eaten = 0;
    bool capped = false;
};

struct EvalStats {
    std::int64_t episode_block = 0;
    double median_survival_steps = 0.0;
    double mean_battery_at_death = 0.0;  // NaN when every episode hit the cap
    double std_battery_at_death = 0.0;
    double median_food_eaten = 0.0;
    double median_poison_eaten = 0.0;
    double capped_fraction = 0.0;

    bool operator==(const EvalStats&) const = default;
};

using ActionSelector = std::function<grid::Action(grid::ObsIndex, Rng&)>;

/// Learning state threaded through run_episode when training.
struct SarsaLearner {
    QTable& q;
    TraceTable& traces;
    const SarsaParams& params;
};

/// Plays one episode until the alive flag drops or `cap` transitions have
/// completed. With a learner, every transition (the fatal one included) is
/// backed up.
EpisodeResult run_episode(const ActionSelector& select, Rng& rng, std::int64_t cap,
                          SarsaLearner* learner = nullptr);

/// Lower median (element (n-1)/2 of the sorted sample).
double lower_median(std::vector<double> values);

EvalStats summarize(std::span<const EpisodeResult> episodes, std::int64_t block);

/// Frozen evaluation of `q`; reproducible from (master_seed, block).
EvalStats evaluate(const QTable& q, const ExperimentConfig& config, std::int64_t block);

/// Uniformly random agent under the same aggregation.
EvalStats run_random_baseline(const ExperimentConfig& config);

struct TrainingResult {
    std::vector<EvalStats> blocks;
    QTable q;
    std::int64_t episodes_trained = 0;
};

/// Trains for n_train_episodes and evaluates after every eval_every
/// episodes. When output_dir is set, streams metrics.csv there and writes
/// checkpoints/block_NNNN.qtable per block.
TrainingResult run_training(const ExperimentConfig& config);

inline constexpr const char* kMetricsHeader =
    "block,episodes_trained,median_survival,mean_battery_at_death,std_battery_at_death,median_food,median_poison,"
    "capped_fraction";

/// One CSV data row in the metrics schema.
void write_metrics_row(std::ostream& out, const EvalStats& stats, std::int64_t episodes_trained);

}  // namespace survival
