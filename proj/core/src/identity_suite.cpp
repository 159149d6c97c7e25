#include <algorithm>
#include <cmath>
#include <functional>

#include "survival/em_planner.hpp"
#include "survival/oracle.hpp"
#include "survival/survival_math.hpp"

namespace survival {

namespace {

struct Fixture {
    std::string name;
    FiniteMdp model;
    bool posterior_representable;  // deterministic dynamics and start state
};

std::vector<Fixture> build_fixtures(std::mt19937_64& rng) {
    std::vector<Fixture> out;
    out.push_back({"chain2", fixtures::chain2(), true});
    out.push_back({"random3x2", fixtures::random_mdp(3, 2, rng), false});
    out.push_back({"random4x2", fixtures::random_mdp(4, 2, rng), false});
    out.push_back({"det3x2", fixtures::random_mdp(3, 2, rng, true), true});
    out.push_back({"det4x2", fixtures::random_mdp(4, 2, rng, true), true});
    return out;
}

// Accumulates the worst violation of one identity across many instances.
class Check {
public:
    Check(std::string name, double tolerance) : result_{std::move(name), true, 0.0, tolerance} {}

    // |lhs - rhs| must stay within tolerance.
    void close(double lhs, double rhs) { observe(std::abs(lhs - rhs)); }
    // lhs <= rhs + tolerance.
    void at_most(double lhs, double rhs) { observe(std::max(0.0, lhs - rhs)); }

    void observe(double violation) {
        if (!(violation <= result_.tolerance)) result_.passed = false;
        if (!(violation <= result_.worst)) result_.worst = violation;
    }

    IdentityCheck result() const { return result_; }

private:
    IdentityCheck result_;
};

}  // namespace

std::vector<IdentityCheck> run_identity_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto fx = build_fixtures(rng);
    std::vector<IdentityCheck> out;

    auto random_policy = [&rng](const FiniteMdp& m, std::size_t horizon) {
        return fixtures::random_policy(m.n_states, m.n_actions, horizon, rng);
    };

    {
        Check sums("enumeration probabilities sum to 1", 1e-10);
        Check logp("exp(trajectory_log_prob) matches enumeration", 1e-12);
        for (const auto& f : fx) {
            for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
                const auto pi = random_policy(f.model, horizon);
                double total = 0.0;
                for (const auto& [traj, p] : enumerate_trajectories(f.model, pi, horizon)) {
                    total += p;
                    logp.close(std::exp(trajectory_log_prob(f.model, pi, traj).value), p);
                }
                sums.close(total, 1.0);
            }
        }
        out.push_back(sums.result());
        out.push_back(logp.result());
    }

    {
        Check decomposition("log P = -F + KL for random (Q, pi)", 1e-9);
        Check kl_sign("KL to posterior is non-negative", 1e-12);
        Check bound("-F <= log P", 1e-12);
        Check kl_routes("KL residual equals direct KL", 1e-9);
        Check nfe_routes("-F recursion equals enumeration", 1e-9);
        for (const auto& f : fx) {
            for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
                for (int rep = 0; rep < 20; ++rep) {
                    const auto q = random_policy(f.model, horizon);
                    const auto p = random_policy(f.model, horizon);
                    const auto fe = free_energy_breakdown(f.model, q, p, horizon);
                    const double direct_kl = kl_to_posterior_direct(f.model, q, p, horizon);
                    decomposition.close(fe.log_likelihood, fe.neg_free_energy + direct_kl);
                    kl_sign.observe(std::max(0.0, -fe.kl_to_posterior));
                    bound.at_most(fe.neg_free_energy, fe.log_likelihood);
                    kl_routes.close(fe.kl_to_posterior, direct_kl);
                    nfe_routes.close(neg_free_energy(f.model, q, p, horizon), fe.neg_free_energy);
                }
            }
        }
        out.push_back(decomposition.result());
        out.push_back(kl_sign.result());
        out.push_back(bound.result());
        out.push_back(kl_routes.result());
        out.push_back(nfe_routes.result());
    }

    {
        Check self("-F(pi, pi) = T * J_T(pi)", 1e-9);
        for (const auto& f : fx) {
            for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
                for (int rep = 0; rep < 20; ++rep) {
                    const auto pi = random_policy(f.model, horizon);
                    const double nfe = free_energy_breakdown(f.model, pi, pi, horizon).neg_free_energy;
                    self.close(nfe, static_cast<double>(horizon) * average_reward_objective(f.model, pi, horizon));
                }
            }
        }
        out.push_back(self.result());
    }

    {
        Check prob("survival probability recursion equals enumeration", 1e-10);
        Check objective("J_T recursion equals enumeration", 1e-10);
        Check messages("sum_s P(s_0) v_0(s) equals survival probability", 1e-12);
        for (const auto& f : fx) {
            for (std::size_t horizon = 1; horizon <= 6; ++horizon) {
                const auto pi = random_policy(f.model, horizon);
                const double dp = multi_step_survival_prob(f.model, pi, horizon);
                prob.close(dp, oracle::survival_prob(f.model, pi, horizon));
                objective.close(average_reward_objective(f.model, pi, horizon),
                                oracle::average_reward(f.model, pi, horizon));
                const auto msg = backward_messages(f.model, pi, horizon);
                double v0 = 0.0;
                for (std::size_t s = 0; s < f.model.n_states; ++s) v0 += f.model.initial_dist[s] * msg.state_values[0][s];
                messages.close(v0, dp);
            }
        }
        out.push_back(prob.result());
        out.push_back(objective.result());
        out.push_back(messages.result());
    }

    {
        Check conditional("e_step equals enumerated posterior action law", 1e-9);
        Check exact("e_step KL to posterior (deterministic fixtures)", 1e-9);
        for (const auto& f : fx) {
            for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
                const auto pi = random_policy(f.model, horizon);
                const auto post = e_step(f.model, pi, horizon);
                conditional.observe(max_abs_difference(post, oracle::posterior_action_conditional(f.model, pi, horizon)));
                if (f.posterior_representable) exact.observe(kl_to_posterior_direct(f.model, post, pi, horizon));
            }
        }
        out.push_back(conditional.result());
        out.push_back(exact.result());
    }

    {
        Check monotone("EM log-likelihood non-decreasing", 1e-10);
        Check post_m("EM trace -F equals T * J_T", 1e-9);
        for (const auto& f : fx) {
            for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
                const auto trace = run_em(f.model, random_policy(f.model, horizon), horizon, {200, 1e-10});
                for (std::size_t k = 1; k < trace.iterations.size(); ++k) {
                    monotone.at_most(trace.iterations[k - 1].log_likelihood, trace.iterations[k].log_likelihood);
                }
                for (const auto& it : trace.iterations) {
                    post_m.close(oracle::neg_free_energy(f.model, it.policy, it.policy, horizon),
                                 static_cast<double>(horizon) * average_reward_objective(f.model, it.policy, horizon));
                }
            }
        }
        out.push_back(monotone.result());
        out.push_back(post_m.result());
    }

    {
        Check global("EM reaches the deterministic optimum on chain2", 1e-6);
        const FiniteMdp chain = fixtures::chain2();
        for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
            const auto init = TimeIndexedPolicy::replicate(PolicyTable::uniform(2, 2), horizon);
            const auto trace = run_em(chain, init, horizon);
            global.close(trace.final().log_likelihood, oracle::best_deterministic_log_likelihood(chain, horizon));
        }
        out.push_back(global.result());
    }

    {
        Check reward("exp(survival_reward(p)) = p and reward <= 0", 1e-12);
        for (double p = 1e-6; p <= 1.0; p *= 1.37) {
            const double r = survival_reward(p);
            reward.close(std::exp(r), p);
            reward.observe(std::max(0.0, r));
        }
        reward.close(survival_reward(1.0), 0.0);
        out.push_back(reward.result());
    }
    return out;
}

}  // namespace survival
