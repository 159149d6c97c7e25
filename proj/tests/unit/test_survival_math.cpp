#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "survival/em_planner.hpp"
#include "survival/oracle.hpp"
#include "survival/survival_math.hpp"

using namespace survival;
using fixtures::kGreen;
using fixtures::kRed;
using fixtures::kStay;
using fixtures::kSwitch;

namespace {

TimeIndexedPolicy always(std::size_t action, std::size_t horizon) {
    return TimeIndexedPolicy::replicate(PolicyTable::deterministic(2, {action, action}), horizon);
}

FiniteMdp immortal(FiniteMdp m) {
    std::fill(m.survival.begin(), m.survival.end(), 1.0);
    return m;
}

}  // namespace

TEST_CASE("survival_log_likelihood") {
    const FiniteMdp m = fixtures::chain2();
    CHECK(survival_log_likelihood(m, {{kGreen, kGreen, kGreen}, {kStay, kStay}}) ==
          doctest::Approx(-0.21072103131565256).epsilon(1e-14));
    CHECK(survival_log_likelihood(m, {{kGreen, kRed, kRed}, {kSwitch, kStay}}) ==
          doctest::Approx(-0.7985076962177715).epsilon(1e-14));
    CHECK(survival_log_likelihood(immortal(m), {{kGreen, kRed, kGreen}, {kSwitch, kSwitch}}) == 0.0);
}

TEST_CASE("multi_step_survival_prob on chain2") {
    const FiniteMdp m = fixtures::chain2();
    CHECK(multi_step_survival_prob(m, always(kStay, 2), 2) == doctest::Approx(0.81).epsilon(1e-14));
    CHECK(multi_step_survival_prob(m, always(kSwitch, 2), 2) == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(multi_step_survival_prob(immortal(m), always(kSwitch, 3), 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("log survival probability does not underflow on long horizons") {
    const FiniteMdp m = fixtures::chain2();
    const double lp = log_multi_step_survival_prob(m, always(kSwitch, 2000), 2000);
    CHECK(lp == doctest::Approx(1000 * (std::log(0.9) + std::log(0.5))).epsilon(1e-12));
}

TEST_CASE("survival_reward") {
    CHECK(survival_reward(1.0) == 0.0);
    CHECK(survival_reward(0.5) == doctest::Approx(-0.6931471805599453).epsilon(1e-15));
    CHECK_THROWS_AS(survival_reward(0.0), std::domain_error);
    CHECK_THROWS_AS(survival_reward(-0.1), std::domain_error);
    CHECK_THROWS_AS(survival_reward(1.0000001), std::domain_error);
}

TEST_CASE("property: survival_reward is non-positive, monotone and inverts exp") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(1e-12, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = unit(rng);
        const double b = unit(rng);
        CHECK(survival_reward(a) <= 0.0);
        CHECK(std::abs(std::exp(survival_reward(a)) - a) <= 1e-12);
        if (a < b) CHECK(survival_reward(a) < survival_reward(b));
    }
}

TEST_CASE("average_reward_objective") {
    const FiniteMdp m = fixtures::chain2();
    CHECK(average_reward_objective(m, always(kStay, 2), 2) == doctest::Approx(-0.10536051565782628).epsilon(1e-14));
    CHECK(average_reward_objective(m, always(kSwitch, 2), 2) == doctest::Approx(-0.39925384810888576).epsilon(1e-14));
    CHECK(average_reward_objective(immortal(m), always(kSwitch, 2), 2) == 0.0);
}

TEST_CASE("invalid model is rejected by the recursions") {
    FiniteMdp m = fixtures::chain2();
    m.survival[0] = 0.0;
    CHECK_THROWS_AS(multi_step_survival_prob(m, always(kStay, 2), 2), std::invalid_argument);
    CHECK_THROWS_AS(average_reward_objective(fixtures::chain2(), always(kStay, 2), 3), std::invalid_argument);
}

TEST_CASE("free_energy_breakdown") {
    const FiniteMdp m = fixtures::chain2();
    SUBCASE("a deterministic trajectory makes the bound tight") {
        const auto fe = free_energy_breakdown(m, always(kStay, 2), always(kStay, 2), 2);
        CHECK(fe.neg_free_energy == doctest::Approx(-0.21072103131565253).epsilon(1e-14));
        CHECK(std::abs(fe.kl_to_posterior) <= 1e-15);
    }
    SUBCASE("Q = P leaves a non-negative gap equal to the direct KL") {
        const auto pi = TimeIndexedPolicy::replicate(PolicyTable::uniform(2, 2), 3);
        const auto fe = free_energy_breakdown(m, pi, pi, 3);
        CHECK(fe.kl_to_posterior > 0.0);
        CHECK(fe.kl_to_posterior == doctest::Approx(kl_to_posterior_direct(m, pi, pi, 3)).epsilon(1e-12));
    }
    SUBCASE("exact e_step closes the gap") {
        const auto pi = TimeIndexedPolicy::replicate(PolicyTable::uniform(2, 2), 3);
        const auto fe = free_energy_breakdown(m, e_step(m, pi, 3), pi, 3);
        CHECK(std::abs(fe.kl_to_posterior) <= 1e-9);
    }
    SUBCASE("Q outside P's support is an error") {
        CHECK_THROWS_AS(free_energy_breakdown(m, always(kSwitch, 2), always(kStay, 2), 2), std::invalid_argument);
        CHECK_THROWS_AS(neg_free_energy(m, always(kSwitch, 2), always(kStay, 2), 2), std::invalid_argument);
        CHECK_THROWS_AS(kl_to_posterior_direct(m, always(kSwitch, 2), always(kStay, 2), 2), std::invalid_argument);
    }
}

TEST_CASE("property: decomposition, bound and self-consistency on random instances") {
    std::mt19937_64 rng(99);
    const FiniteMdp models[] = {fixtures::chain2(), fixtures::random_mdp(3, 2, rng)};
    for (const auto& m : models) {
        for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
            for (int rep = 0; rep < 20; ++rep) {
                const auto q = fixtures::random_policy(m.n_states, m.n_actions, horizon, rng);
                const auto p = fixtures::random_policy(m.n_states, m.n_actions, horizon, rng);
                const auto fe = free_energy_breakdown(m, q, p, horizon);
                const double kl = kl_to_posterior_direct(m, q, p, horizon);
                CHECK(std::abs(fe.log_likelihood - (fe.neg_free_energy + kl)) < 1e-9);
                CHECK(fe.kl_to_posterior >= -1e-12);
                CHECK(fe.neg_free_energy <= fe.log_likelihood + 1e-12);
                CHECK(std::abs(neg_free_energy(m, q, p, horizon) - fe.neg_free_energy) < 1e-9);

                const double self = free_energy_breakdown(m, p, p, horizon).neg_free_energy;
                CHECK(std::abs(self - static_cast<double>(horizon) * average_reward_objective(m, p, horizon)) < 1e-9);
            }
        }
    }
}

TEST_CASE("property: recursions agree with enumeration up to T = 6") {
    std::mt19937_64 rng(123);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t ns = 2 + rep % 3;
        const FiniteMdp m = fixtures::random_mdp(ns, 2, rng, rep % 3 == 0);
        for (std::size_t horizon = 1; horizon <= 6; ++horizon) {
            const auto pi = fixtures::random_policy(ns, 2, horizon, rng);
            CHECK(std::abs(multi_step_survival_prob(m, pi, horizon) - oracle::survival_prob(m, pi, horizon)) < 1e-10);
            CHECK(std::abs(average_reward_objective(m, pi, horizon) - oracle::average_reward(m, pi, horizon)) < 1e-10);
        }
    }
}
