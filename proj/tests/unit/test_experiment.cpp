#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "survival/experiment.hpp"

using namespace survival;

namespace {

const ActionSelector kUniform = [](grid::ObsIndex, Rng& rng) {
    return static_cast<grid::Action>(uniform_index(rng, grid::kNumActions));
};

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.master_seed = 42;
    c.n_train_episodes = 200;
    c.eval_every = 100;
    c.eval_episodes = 200;
    return c;
}

}  // namespace

TEST_CASE("lower median") {
    CHECK(lower_median({3.0}) == 3.0);
    CHECK(lower_median({4.0, 1.0}) == 1.0);
    CHECK(lower_median({5.0, 1.0, 3.0, 2.0}) == 2.0);
    CHECK(std::isnan(lower_median({})));
}

TEST_CASE("summarize") {
    std::vector<EpisodeResult> eps(4);
    eps[0] = {10, 50.0, 1, 0, false};
    eps[1] = {20, 70.0, 3, 1, false};
    eps[2] = {30, std::nullopt, 2, 0, true};
    eps[3] = {5, 60.0, 0, 0, false};
    const EvalStats s = summarize(eps, 7);
    CHECK(s.episode_block == 7);
    CHECK(s.median_survival_steps == 10.0);
    CHECK(s.mean_battery_at_death == doctest::Approx(60.0));
    CHECK(s.std_battery_at_death == doctest::Approx(std::sqrt(200.0 / 3.0)));
    CHECK(s.median_food_eaten == 1.0);
    CHECK(s.median_poison_eaten == 0.0);
    CHECK(s.capped_fraction == 0.25);

    std::vector<EpisodeResult> all_capped(2, EpisodeResult{5, std::nullopt, 0, 0, true});
    const EvalStats c = summarize(all_capped, 1);
    CHECK(std::isnan(c.mean_battery_at_death));
    CHECK(c.capped_fraction == 1.0);
}

TEST_CASE("run_episode: survival steps count the alive draws before the first death") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = derive_stream(7, StreamKind::Test, i);
        Rng replay = rng;
        const EpisodeResult r = run_episode(kUniform, rng, 10000);

        // Replay the same stream by hand.
        grid::GridState s = grid::reset(replay);
        auto action = kUniform(grid::encode_observation(grid::observe(s)), replay);
        std::int64_t alive_draws = 0;
        int food = 0;
        double death_battery = -1.0;
        while (true) {
            const auto out = grid::step(s, action, replay);
            if (!out.alive) {
                death_battery = s.battery;
                break;
            }
            ++alive_draws;
            food += out.next_state.last_eat == grid::LastEat::Food;
            action = kUniform(grid::encode_observation(out.observation), replay);
            s = out.next_state;
        }
        REQUIRE(r.survival_steps == alive_draws);
        REQUIRE(r.food_eaten == food);
        REQUIRE(r.battery_at_death.has_value());
        REQUIRE(*r.battery_at_death == death_battery);
        REQUIRE_FALSE(r.capped);
    }
}

TEST_CASE("run_episode: cap") {
    Rng rng = derive_stream(7, StreamKind::Test, 999);
    // Always bump into the top wall: the episode survives at least a few steps with high probability.
    const ActionSelector up = [](grid::ObsIndex, Rng&) { return grid::Action::Up; };
    const EpisodeResult r = run_episode(up, rng, 1);
    CHECK(r.survival_steps <= 1);
    if (r.survival_steps == 1) {
        CHECK(r.capped);
        CHECK_FALSE(r.battery_at_death.has_value());
    }
    int capped = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        Rng g = derive_stream(8, StreamKind::Test, i);
        const EpisodeResult e = run_episode(up, g, 5);
        CHECK(e.survival_steps <= 5);
        CHECK(e.capped == (e.survival_steps == 5));
        capped += e.capped;
    }
    CHECK(capped > 40);
    CHECK_THROWS_AS(run_episode(up, rng, 0), std::invalid_argument);
}

TEST_CASE("run_episode: a policy that never eats dies") {
    const ActionSelector wander = [](grid::ObsIndex obs, Rng&) {
        return grid::decode_observation(obs).x < 4 ? grid::Action::Right : grid::Action::Left;
    };
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = derive_stream(9, StreamKind::Test, i);
        const EpisodeResult e = run_episode(wander, rng, 10000);
        CHECK_FALSE(e.capped);
        CHECK(e.food_eaten == 0);
        CHECK(e.poison_eaten == 0);
    }
}

TEST_CASE("random baseline") {
    ExperimentConfig c;
    c.master_seed = 3;
    const EvalStats s = run_random_baseline(c);
    CHECK(s.median_survival_steps < 25.0);
    CHECK(s.median_food_eaten <= 1.0);
    CHECK(s == run_random_baseline(c));
}

TEST_CASE("evaluate") {
    const ExperimentConfig c = small_config();
    const QTable q;
    SUBCASE("deterministic and pure") {
        const QTable before = q;
        const EvalStats a = evaluate(q, c, 3);
        CHECK(a == evaluate(q, c, 3));
        CHECK(q == before);
        CHECK(a.episode_block == 3);
    }
    SUBCASE("an untrained table behaves like the random agent") {
        ExperimentConfig big = c;
        big.eval_episodes = 2000;
        const EvalStats zero = evaluate(q, big, 1);
        const EvalStats random = run_random_baseline(big);
        CHECK(std::abs(zero.median_survival_steps - random.median_survival_steps) <= 2.0);
        CHECK(std::abs(zero.mean_battery_at_death - random.mean_battery_at_death) <= 1.0);
    }
}

TEST_CASE("run_training") {
    SUBCASE("one stats row per block") {
        const TrainingResult r = run_training(small_config());
        CHECK(r.blocks.size() == 2);
        CHECK(r.episodes_trained == 200);
        CHECK(r.blocks[1].episode_block == 2);
        for (double v : r.q.values()) REQUIRE(v <= 0.0);
    }
    SUBCASE("same seed gives bit-identical tables") {
        const TrainingResult a = run_training(small_config());
        const TrainingResult b = run_training(small_config());
        CHECK(a.q == b.q);
        CHECK(a.blocks == b.blocks);
    }
    SUBCASE("invalid configs") {
        ExperimentConfig c = small_config();
        c.eval_every = 500;
        CHECK_THROWS_AS(run_training(c), std::invalid_argument);
        c = small_config();
        c.n_train_episodes = 0;
        CHECK_THROWS_AS(run_training(c), std::invalid_argument);
    }
    SUBCASE("I/O failures name the file") {
        ExperimentConfig c = small_config();
        c.output_dir = "/proc/definitely/not/writable";
        CHECK_THROWS_WITH_AS(run_training(c), doctest::Contains("/proc/definitely"), std::runtime_error);
    }
}

TEST_CASE("metrics row format") {
    std::ostringstream out;
    EvalStats s;
    s.episode_block = 2;
    s.median_survival_steps = 13;
    s.mean_battery_at_death = 47.5;
    s.std_battery_at_death = 5.25;
    s.capped_fraction = 0;
    write_metrics_row(out, s, 2000);
    CHECK(out.str() == "2,2000,13,47.5,5.25,0,0,0\n");
}
