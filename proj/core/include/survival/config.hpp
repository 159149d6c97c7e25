#pragma once

#include <filesystem>
#include <string>

#include "survival/experiment.hpp"

namespace survival {

/// Reads an ExperimentConfig from a JSON object. Absent fields keep their
/// defaults; recognised keys are master_seed, n_train_episodes, eval_every,
/// eval_episodes, episode_cap, greedy_eval, output_dir and a nested "sarsa"
/// object with alpha, gamma, lambda, epsilon and trace_cutoff.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace survival
