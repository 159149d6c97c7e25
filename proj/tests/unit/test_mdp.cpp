#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "survival/mdp.hpp"

using namespace survival;
using fixtures::kGreen;
using fixtures::kRed;
using fixtures::kStay;
using fixtures::kSwitch;

namespace {

TimeIndexedPolicy always(std::size_t action, std::size_t horizon) {
    return TimeIndexedPolicy::replicate(PolicyTable::deterministic(2, {action, action}), horizon);
}

TimeIndexedPolicy uniform2(std::size_t horizon) {
    return TimeIndexedPolicy::replicate(PolicyTable::uniform(2, 2), horizon);
}

}  // namespace

TEST_CASE("validate_mdp accepts chain2") {
    CHECK(validate_mdp(fixtures::chain2()).empty());
}

TEST_CASE("validate_mdp names a transition row that does not sum to one") {
    FiniteMdp m = fixtures::chain2();
    m.p(kRed, kSwitch, kGreen) = 0.9;
    const auto report = validate_mdp(m);
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("state 1, action 1") != std::string::npos);
    CHECK_THROWS_AS(require_valid(m), std::invalid_argument);
}

TEST_CASE("validate_mdp rejects a zero survival probability") {
    FiniteMdp m = fixtures::chain2();
    m.survival[kRed] = 0.0;
    const auto report = validate_mdp(m);
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("non-positive survival probability") != std::string::npos);
}

TEST_CASE("validate_mdp flags a bad initial distribution and oversize survival") {
    FiniteMdp m = fixtures::chain2();
    m.initial_dist = {0.5, 0.4};
    m.survival[kGreen] = 1.5;
    CHECK(validate_mdp(m).size() == 2);
}

TEST_CASE("enumeration of a deterministic system yields one certain trajectory") {
    const auto out = enumerate_trajectories(fixtures::chain2(), always(kStay, 2), 2);
    REQUIRE(out.size() == 1);
    CHECK(out[0].probability == 1.0);
    CHECK(out[0].trajectory.states == std::vector<std::size_t>{kGreen, kGreen, kGreen});
}

TEST_CASE("enumeration under the uniform policy on chain2, T=1") {
    const auto out = enumerate_trajectories(fixtures::chain2(), uniform2(1), 1);
    REQUIRE(out.size() == 2);
    for (const auto& w : out) CHECK(w.probability == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("enumeration refuses instances beyond the size guard") {
    std::mt19937_64 rng(1);
    const FiniteMdp big = fixtures::random_mdp(40, 4, rng);
    const auto pi = TimeIndexedPolicy::replicate(PolicyTable::uniform(40, 4), 3);
    CHECK_FALSE(within_enumeration_guard(big, 3));
    CHECK_THROWS_WITH_AS(enumerate_trajectories(big, pi, 3), doctest::Contains("exceeds"), std::invalid_argument);
}

TEST_CASE("trajectory_log_prob") {
    const FiniteMdp m = fixtures::chain2();
    SUBCASE("certain trajectory has log-probability 0") {
        const StateTrajectory t{{kGreen, kGreen, kGreen}, {kStay, kStay}};
        CHECK(trajectory_log_prob(m, always(kStay, 2), t).value == 0.0);
    }
    SUBCASE("uniform policy, one step") {
        const StateTrajectory t{{kGreen, kRed}, {kSwitch}};
        CHECK(trajectory_log_prob(m, uniform2(1), t).value == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    }
    SUBCASE("impossible transition gives the sentinel") {
        const StateTrajectory t{{kGreen, kRed}, {kStay}};
        const LogProb lp = trajectory_log_prob(m, uniform2(1), t);
        CHECK(lp.is_impossible());
        CHECK_FALSE(std::isnan(lp.value));
    }
    SUBCASE("out-of-range index") {
        const StateTrajectory t{{kGreen, 7}, {kStay}};
        CHECK_THROWS_AS(trajectory_log_prob(m, uniform2(1), t), std::out_of_range);
    }
}

TEST_CASE("property: enumeration sums to one and matches trajectory_log_prob") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t ns = 2 + rep % 3;
        const std::size_t na = 1 + rep % 2 + 1;
        const std::size_t horizon = 1 + rep % 4;
        const FiniteMdp m = fixtures::random_mdp(ns, na, rng, rep % 2 == 0);
        const auto pi = fixtures::random_policy(ns, na, horizon, rng);
        double total = 0.0;
        for (const auto& [traj, p] : enumerate_trajectories(m, pi, horizon)) {
            total += p;
            CHECK(std::abs(std::exp(trajectory_log_prob(m, pi, traj).value) - p) <= 1e-12);
        }
        CHECK(std::abs(total - 1.0) <= 1e-10);
    }
}

TEST_CASE("model JSON loading") {
    const std::string text = R"({
        "n_states": 2, "n_actions": 2, "initial_dist": [1, 0],
        "transition": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
        "survival": [0.9, 0.5]})";
    const FiniteMdp m = parse_mdp_json(text);
    CHECK(m.transition == fixtures::chain2().transition);
    CHECK(m.survival == fixtures::chain2().survival);

    CHECK_THROWS_WITH_AS(parse_mdp_json(R"({"n_states": 2})"), doctest::Contains("n_actions"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mdp_json("{not json"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_mdp_json(R"({
        "n_states": 1, "n_actions": 1, "initial_dist": [1],
        "transition": [[[1]]], "survival": [0]})"),
                         doctest::Contains("non-positive survival"), std::invalid_argument);
}
