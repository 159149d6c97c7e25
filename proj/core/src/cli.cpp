#include "survival/cli.hpp"

#include <cstdio>
#include <exception>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "survival/checkpoint.hpp"
#include "survival/config.hpp"
#include "survival/em_planner.hpp"
#include "survival/experiment.hpp"
#include "survival/oracle.hpp"

namespace survival {

namespace {

void print_stats(std::ostream& out, const EvalStats& stats, std::int64_t episodes_trained) {
    out << kMetricsHeader << '\n';
    write_metrics_row(out, stats, episodes_trained);
}

int run_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::optional<std::string>& out_dir, std::ostream& out) {
    ExperimentConfig config = parse_config(config_path);
    if (seed) config.master_seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    if (config.output_dir.empty()) config.output_dir = "out";
    const TrainingResult result = run_training(config);
    out << "# master_seed=" << config.master_seed << '\n' << kMetricsHeader << '\n';
    for (const auto& block : result.blocks) write_metrics_row(out, block, block.episode_block * config.eval_every);
    out << "# metrics: " << (config.output_dir / "metrics.csv").string() << '\n';
    return kExitOk;
}

int run_eval(const std::string& path, std::int64_t episodes, std::optional<std::uint64_t> seed,
             std::optional<std::int64_t> block, bool greedy, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(path);
    ExperimentConfig config;
    config.sarsa = ckpt.params;
    config.master_seed = seed.value_or(ckpt.master_seed);
    config.eval_episodes = episodes;
    config.greedy_eval = greedy;
    const EvalStats stats = evaluate(ckpt.q, config, block.value_or(ckpt.episodes_trained / config.eval_every));
    print_stats(out, stats, ckpt.episodes_trained);
    return kExitOk;
}

int run_baseline(std::int64_t episodes, std::uint64_t seed, std::ostream& out) {
    ExperimentConfig config;
    config.master_seed = seed;
    config.eval_episodes = episodes;
    print_stats(out, run_random_baseline(config), 0);
    return kExitOk;
}

int run_em_demo(const std::string& model_path, std::size_t horizon, std::size_t iters, std::ostream& out) {
    const FiniteMdp model = load_mdp_json(model_path);
    const auto init = TimeIndexedPolicy::replicate(PolicyTable::uniform(model.n_states, model.n_actions), horizon);
    const EmTrace trace = run_em(model, init, horizon, {iters, 1e-10});
    out << "k,log_likelihood,neg_free_energy,kl\n";
    char buf[160];
    for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
        const auto& it = trace.iterations[k];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, it.log_likelihood, it.neg_free_energy_after_m,
                      it.kl_after_m);
        out << buf;
    }
    return kExitOk;
}

int run_oracle_check(std::ostream& out) {
    const auto checks = run_identity_suite();
    bool all = true;
    out << std::left << std::setw(56) << "identity" << std::setw(8) << "result" << std::setw(14) << "worst"
        << "tolerance\n";
    for (const auto& c : checks) {
        all = all && c.passed;
        out << std::left << std::setw(56) << c.name << std::setw(8) << (c.passed ? "PASS" : "FAIL") << std::setw(14)
            << std::setprecision(3) << std::scientific << c.worst << c.tolerance << std::defaultfloat << '\n';
    }
    out << (all ? "all identities hold\n" : "identity check FAILED\n");
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Survival reinforcement learning toolkit"};
    app.name("survival");
    app.require_subcommand(1);

    auto* train = app.add_subcommand("train", "Train Sarsa(lambda) on the grid world and write metrics");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    train->add_option("--config", config_path, "JSON experiment config")->required();
    train->add_option("--seed", seed, "Override master seed");
    train->add_option("--out", out_dir, "Output directory");

    auto* eval = app.add_subcommand("eval", "Evaluate a frozen checkpoint");
    std::string checkpoint_path;
    std::int64_t eval_episodes = 1000;
    std::optional<std::uint64_t> eval_seed;
    std::optional<std::int64_t> eval_block;
    bool greedy = false;
    eval->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
    eval->add_option("--episodes", eval_episodes, "Evaluation episodes")->required()->check(CLI::PositiveNumber);
    eval->add_option("--seed", eval_seed, "Override the checkpoint's master seed");
    eval->add_option("--block", eval_block, "Evaluation block index (default episodes_trained / 1000)");
    eval->add_flag("--greedy", greedy, "Evaluate with epsilon = 0");

    auto* baseline = app.add_subcommand("baseline", "Uniformly random agent");
    std::int64_t baseline_episodes = 1000;
    std::uint64_t baseline_seed = 1;
    baseline->add_option("--episodes", baseline_episodes, "Episodes")->required()->check(CLI::PositiveNumber);
    baseline->add_option("--seed", baseline_seed, "Master seed");

    auto* em = app.add_subcommand("em-demo", "Run exact EM on a finite MDP and print the trace as CSV");
    std::string model_path;
    std::size_t horizon = 1;
    std::size_t iters = 50;
    em->add_option("--model", model_path, "JSON model file")->required();
    em->add_option("--horizon", horizon, "Horizon T")->required()->check(CLI::PositiveNumber);
    em->add_option("--iters", iters, "Maximum EM iterations")->required()->check(CLI::PositiveNumber);

    auto* oracle_check = app.add_subcommand("oracle-check", "Verify every planner identity on built-in fixtures");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train) return run_train(config_path, seed, out_dir, out);
        if (*eval) return run_eval(checkpoint_path, eval_episodes, eval_seed, eval_block, greedy, out);
        if (*baseline) return run_baseline(baseline_episodes, baseline_seed, out);
        if (*em) return run_em_demo(model_path, horizon, iters, out);
        if (*oracle_check) return run_oracle_check(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace survival
