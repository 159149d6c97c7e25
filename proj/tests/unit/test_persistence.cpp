#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "survival/checkpoint.hpp"
#include "survival/config.hpp"

using namespace survival;

namespace {

std::string serialize(const Checkpoint& c) {
    std::ostringstream out;
    write_checkpoint(out, c);
    return out.str();
}

Checkpoint parse(const std::string& text) {
    std::istringstream in(text);
    return read_checkpoint(in);
}

}  // namespace

TEST_CASE("checkpoint: empty table") {
    Checkpoint c;
    c.episodes_trained = 1000;
    c.master_seed = 5;
    const std::string text = serialize(c);
    CHECK(text ==
          "SURVIVAL-RL-QTABLE v1\n"
          "alpha=0.10000000000000001 gamma=0.94999999999999996 lambda=0.10000000000000001 "
          "epsilon=0.01 trace_cutoff=0.0001 episodes_trained=1000 master_seed=5\n");
    const Checkpoint back = parse(text);
    CHECK(back.q == c.q);
    CHECK(back.episodes_trained == 1000);
    CHECK(back.master_seed == 5);
}

TEST_CASE("checkpoint: single entry") {
    Checkpoint c;
    c.q(0, 0) = -0.1;
    const std::string text = serialize(c);
    CHECK(text.substr(text.find('\n', text.find('\n') + 1) + 1) == "0 0 -0.10000000000000001\n");
    CHECK(parse(text).q(0, 0) == -0.1);
}

TEST_CASE("checkpoint: round trip is bit-exact") {
    Rng rng = derive_stream(11, StreamKind::Test, 0);
    Checkpoint c;
    c.params.alpha = 0.3;
    c.params.epsilon = 0.05;
    c.episodes_trained = 123456;
    c.master_seed = 0xFFFFFFFFFFFFFFFFull;
    for (int i = 0; i < 5000; ++i) {
        const auto obs = static_cast<grid::ObsIndex>(uniform_index(rng, grid::kNumObservations));
        c.q(obs, static_cast<std::size_t>(uniform_index(rng, grid::kNumActions))) =
            -std::ldexp(uniform01(rng), -static_cast<int>(uniform_index(rng, 60)));
    }
    const Checkpoint back = parse(serialize(c));
    CHECK(back.q == c.q);
    CHECK(back.params == c.params);
    CHECK(back.episodes_trained == c.episodes_trained);
    CHECK(back.master_seed == c.master_seed);

    const auto path = std::filesystem::temp_directory_path() / "survival_ckpt_roundtrip.qtable";
    save_checkpoint(c, path);
    CHECK(load_checkpoint(path).q == c.q);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint: malformed input") {
    Checkpoint c;
    c.q(3, 1) = -0.5;
    const std::string good = serialize(c);

    CHECK_THROWS_WITH_AS(parse("SURVIVAL-RL-QTABLE v2\n"), doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse(""), doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse(good + "7 banana -1\n"), doctest::Contains("line 4"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse(good + "43740 0 -1\n"), doctest::Contains("line 4"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse(good + "0 5 -1\n"), doctest::Contains("line 4"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse(good + "0 1\n"), doctest::Contains("line 4"), std::runtime_error);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/survival.qtable"), std::runtime_error);
}

TEST_CASE("config: defaults and overrides") {
    const ExperimentConfig d = parse_config_text("{}");
    CHECK(d.master_seed == 1);
    CHECK(d.n_train_episodes == 50000);
    CHECK(d.eval_every == 1000);
    CHECK(d.eval_episodes == 1000);
    CHECK(d.episode_cap == 10000);
    CHECK(d.sarsa == SarsaParams{});
    CHECK_FALSE(d.greedy_eval);
    CHECK(d.output_dir.empty());

    const ExperimentConfig e = parse_config_text(R"({"sarsa": {"epsilon": 0.05}, "master_seed": 9})");
    CHECK(e.sarsa.epsilon == 0.05);
    CHECK(e.sarsa.alpha == 0.1);
    CHECK(e.master_seed == 9);
}

TEST_CASE("config: errors name the field") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"n_train_episodes": -5})"), doctest::Contains("n_train_episodes"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"sarsa": {"alpha": "fast"}})"), doctest::Contains("sarsa.alpha"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"sarsa": {"gama": 0.9}})"), doctest::Contains("sarsa.gama"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"sarsa": {"gamma": 1.5}})"), doctest::Contains("gamma"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[1, 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("[]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), std::runtime_error);
}
