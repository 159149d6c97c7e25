#include "survival/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "survival/checkpoint.hpp"

namespace survival {

void validate(const ExperimentConfig& c) {
    if (c.n_train_episodes < 1) throw std::invalid_argument("n_train_episodes must be at least 1");
    if (c.eval_every < 1) throw std::invalid_argument("eval_every must be at least 1");
    if (c.eval_episodes < 1) throw std::invalid_argument("eval_episodes must be at least 1");
    if (c.episode_cap < 1) throw std::invalid_argument("episode_cap must be at least 1");
    if (c.eval_every > c.n_train_episodes)
        throw std::invalid_argument("eval_every must not exceed n_train_episodes");
    validate(c.sarsa);
}

EpisodeResult run_episode(const ActionSelector& select, Rng& rng, std::int64_t cap, SarsaLearner* learner) {
    if (cap < 1) throw std::invalid_argument("episode cap must be at least 1");
    if (learner) reset_traces(learner->traces);

    EpisodeResult result;
    grid::GridState state = grid::reset(rng);
    grid::ObsIndex obs = grid::encode_observation(grid::observe(state));
    grid::Action action = select(obs, rng);

    while (true) {
        if (result.survival_steps == cap) {
            result.capped = true;
            break;
        }
        const grid::StepOutcome out = grid::step(state, action, rng);
        if (!out.alive) {
            result.battery_at_death = state.battery;
            if (learner) {
                update(learner->q, learner->traces, obs, action, out.reward, obs, action, true, learner->params);
            }
            break;
        }
        ++result.survival_steps;
        if (out.next_state.last_eat == grid::LastEat::Food) ++result.food_eaten;
        if (out.next_state.last_eat == grid::LastEat::Poison) ++result.poison_eaten;

        const grid::ObsIndex next_obs = grid::encode_observation(out.observation);
        const grid::Action next_action = select(next_obs, rng);
        if (learner) {
            update(learner->q, learner->traces, obs, action, out.reward, next_obs, next_action, false,
                   learner->params);
        }
        state = out.next_state;
        obs = next_obs;
        action = next_action;
    }
    return result;
}

double lower_median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

EvalStats summarize(std::span<const EpisodeResult> episodes, std::int64_t block) {
    EvalStats stats;
    stats.episode_block = block;
    if (episodes.empty()) return stats;

    std::vector<double> survival;
    std::vector<double> food;
    std::vector<double> poison;
    std::vector<double> battery;
    std::size_t capped = 0;
    for (const auto& e : episodes) {
        survival.push_back(static_cast<double>(e.survival_steps));
        food.push_back(e.food_eaten);
        poison.push_back(e.poison_eaten);
        if (e.battery_at_death) battery.push_back(*e.battery_at_death);
        if (e.capped) ++capped;
    }
    stats.median_survival_steps = lower_median(std::move(survival));
    stats.median_food_eaten = lower_median(std::move(food));
    stats.median_poison_eaten = lower_median(std::move(poison));
    stats.capped_fraction = static_cast<double>(capped) / static_cast<double>(episodes.size());

    if (battery.empty()) {
        stats.mean_battery_at_death = std::numeric_limits<double>::quiet_NaN();
        stats.std_battery_at_death = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sum = 0.0;
        for (double b : battery) sum += b;
        const double mean = sum / static_cast<double>(battery.size());
        double sq = 0.0;
        for (double b : battery) sq += (b - mean) * (b - mean);
        stats.mean_battery_at_death = mean;
        stats.std_battery_at_death = std::sqrt(sq / static_cast<double>(battery.size()));
    }
    return stats;
}

EvalStats evaluate(const QTable& q, const ExperimentConfig& config, std::int64_t block) {
    const double epsilon = config.greedy_eval ? 0.0 : config.sarsa.epsilon;
    const ActionSelector greedy = [&q, epsilon](grid::ObsIndex obs, Rng& rng) {
        return select_action(q, obs, epsilon, rng);
    };
    std::vector<EpisodeResult> episodes;
    episodes.reserve(static_cast<std::size_t>(config.eval_episodes));
    for (std::int64_t i = 0; i < config.eval_episodes; ++i) {
        Rng rng = derive_stream(config.master_seed, StreamKind::Evaluation, static_cast<std::uint64_t>(block),
                                static_cast<std::uint64_t>(i));
        episodes.push_back(run_episode(greedy, rng, config.episode_cap));
    }
    return summarize(episodes, block);
}

EvalStats run_random_baseline(const ExperimentConfig& config) {
    const ActionSelector uniform = [](grid::ObsIndex, Rng& rng) {
        return static_cast<grid::Action>(uniform_index(rng, grid::kNumActions));
    };
    std::vector<EpisodeResult> episodes;
    episodes.reserve(static_cast<std::size_t>(config.eval_episodes));
    for (std::int64_t i = 0; i < config.eval_episodes; ++i) {
        Rng rng = derive_stream(config.master_seed, StreamKind::Baseline, static_cast<std::uint64_t>(i));
        episodes.push_back(run_episode(uniform, rng, config.episode_cap));
    }
    return summarize(episodes, 0);
}

void write_metrics_row(std::ostream& out, const EvalStats& s, std::int64_t episodes_trained) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(s.episode_block), static_cast<long long>(episodes_trained),
                  s.median_survival_steps, s.mean_battery_at_death, s.std_battery_at_death, s.median_food_eaten,
                  s.median_poison_eaten, s.capped_fraction);
    out << buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::string block_file_name(std::int64_t block) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "block_%04lld.qtable", static_cast<long long>(block));
    return buf;
}

}  // namespace

TrainingResult run_training(const ExperimentConfig& config) {
    validate(config);

    std::ofstream metrics;
    std::filesystem::path checkpoint_dir;
    if (!config.output_dir.empty()) {
        checkpoint_dir = config.output_dir / "checkpoints";
        std::error_code ec;
        std::filesystem::create_directories(checkpoint_dir, ec);
        if (ec) throw std::runtime_error("cannot create " + checkpoint_dir.string() + ": " + ec.message());
        metrics = open_for_write(config.output_dir / "metrics.csv");
        metrics << "# master_seed=" << config.master_seed << '\n' << kMetricsHeader << '\n';
    }

    TrainingResult result;
    TraceTable traces;
    SarsaLearner learner{result.q, traces, config.sarsa};
    const ActionSelector behaviour = [&q = result.q, epsilon = config.sarsa.epsilon](grid::ObsIndex obs,
                                                                                    Rng& rng) {
        return select_action(q, obs, epsilon, rng);
    };

    for (std::int64_t episode = 0; episode < config.n_train_episodes; ++episode) {
        Rng rng = derive_stream(config.master_seed, StreamKind::Training, static_cast<std::uint64_t>(episode));
        run_episode(behaviour, rng, config.episode_cap, &learner);
        result.episodes_trained = episode + 1;

        if (result.episodes_trained % config.eval_every != 0) continue;
        const std::int64_t block = result.episodes_trained / config.eval_every;
        EvalStats stats = evaluate(result.q, config, block);
        if (metrics.is_open()) {
            write_metrics_row(metrics, stats, result.episodes_trained);
            metrics.flush();
            if (!metrics) throw std::runtime_error("write failed on " + (config.output_dir / "metrics.csv").string());
            save_checkpoint({config.sarsa, result.episodes_trained, config.master_seed, result.q},
                            checkpoint_dir / block_file_name(block));
        }
        result.blocks.push_back(stats);
    }
    return result;
}

}  // namespace survival
