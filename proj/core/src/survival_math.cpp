#include "survival/survival_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace survival {

double survival_reward(double p_survive) {
    if (!(p_survive > 0.0)) {
        throw std::domain_error("survival probability must be positive, got " + std::to_string(p_survive));
    }
    if (p_survive > 1.0) {
        throw std::domain_error("survival probability must not exceed 1, got " + std::to_string(p_survive));
    }
    return std::log(p_survive);
}

double survival_log_likelihood(const FiniteMdp& model, const StateTrajectory& traj) {
    if (traj.states.size() != traj.actions.size() + 1) throw std::invalid_argument("trajectory length mismatch");
    double total = 0.0;
    for (std::size_t t = 0; t < traj.actions.size(); ++t) {
        const std::size_t s = traj.states[t];
        if (s >= model.n_states) throw std::out_of_range("trajectory state index out of range");
        total += std::log(model.survival[s]);
    }
    return total;
}

namespace {

// Propagates the (unnormalized) state distribution one step under pi_t.
void propagate(const FiniteMdp& model, const PolicyTable& pi, const std::vector<double>& from,
               std::vector<double>& to) {
    std::fill(to.begin(), to.end(), 0.0);
    for (std::size_t s = 0; s < model.n_states; ++s) {
        if (from[s] == 0.0) continue;
        for (std::size_t a = 0; a < model.n_actions; ++a) {
            const double w = from[s] * pi(s, a);
            if (w == 0.0) continue;
            for (std::size_t n = 0; n < model.n_states; ++n) to[n] += w * model.p(s, a, n);
        }
    }
}

}  // namespace

double log_multi_step_survival_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy,
                                    std::size_t horizon) {
    require_valid(model, policy, horizon);
    std::vector<double> alpha = model.initial_dist;
    std::vector<double> next(model.n_states);
    double log_p = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        double z = 0.0;
        for (std::size_t s = 0; s < model.n_states; ++s) {
            alpha[s] *= model.survival[s];
            z += alpha[s];
        }
        log_p += std::log(z);
        for (auto& x : alpha) x /= z;
        propagate(model, policy.at(t), alpha, next);
        alpha.swap(next);
    }
    return log_p;
}

double multi_step_survival_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    return std::exp(log_multi_step_survival_prob(model, policy, horizon));
}

double average_reward_objective(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    require_valid(model, policy, horizon);
    std::vector<double> occupancy = model.initial_dist;
    std::vector<double> next(model.n_states);
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t s = 0; s < model.n_states; ++s) {
            if (occupancy[s] > 0.0) total += occupancy[s] * std::log(model.survival[s]);
        }
        propagate(model, policy.at(t), occupancy, next);
        occupancy.swap(next);
    }
    return total / static_cast<double>(horizon);
}

FreeEnergyBreakdown free_energy_breakdown(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                                          const TimeIndexedPolicy& p_policy, std::size_t horizon) {
    require_valid(model, p_policy, horizon);
    const auto q_trajectories = enumerate_trajectories(model, q_policy, horizon);

    double neg_f = 0.0;
    for (const auto& [traj, q] : q_trajectories) {
        const LogProb log_p = trajectory_log_prob(model, p_policy, traj);
        if (log_p.is_impossible()) {
            throw std::invalid_argument(
                "Q assigns positive probability to a trajectory that is impossible under P; KL is undefined");
        }
        neg_f += q * (survival_log_likelihood(model, traj) - (std::log(q) - log_p.value));
    }

    FreeEnergyBreakdown out;
    out.neg_free_energy = neg_f;
    out.log_likelihood = log_multi_step_survival_prob(model, p_policy, horizon);
    out.kl_to_posterior = out.log_likelihood - out.neg_free_energy;
    return out;
}

double kl_to_posterior_direct(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                              const TimeIndexedPolicy& p_policy, std::size_t horizon) {
    // Normalizer of the posterior, summed over P's own trajectories.
    double evidence = 0.0;
    for (const auto& [traj, p] : enumerate_trajectories(model, p_policy, horizon))
        evidence += p * std::exp(survival_log_likelihood(model, traj));
    const double log_evidence = std::log(evidence);

    double kl = 0.0;
    for (const auto& [traj, q] : enumerate_trajectories(model, q_policy, horizon)) {
        const LogProb log_p = trajectory_log_prob(model, p_policy, traj);
        if (log_p.is_impossible()) {
            throw std::invalid_argument(
                "Q assigns positive probability to a trajectory that is impossible under P; KL is undefined");
        }
        const double log_posterior = log_p.value + survival_log_likelihood(model, traj) - log_evidence;
        kl += q * (std::log(q) - log_posterior);
    }
    return kl;
}

double neg_free_energy(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                       const TimeIndexedPolicy& p_policy, std::size_t horizon) {
    require_valid(model, q_policy, horizon);
    require_valid(model, p_policy, horizon);
    std::vector<double> occupancy = model.initial_dist;
    std::vector<double> next(model.n_states);
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const PolicyTable& q = q_policy.at(t);
        const PolicyTable& p = p_policy.at(t);
        for (std::size_t s = 0; s < model.n_states; ++s) {
            if (occupancy[s] == 0.0) continue;
            double ratio_term = 0.0;
            for (std::size_t a = 0; a < model.n_actions; ++a) {
                if (q(s, a) == 0.0) continue;
                if (p(s, a) == 0.0) {
                    throw std::invalid_argument("Q takes action " + std::to_string(a) + " at state " +
                                                std::to_string(s) + ", step " + std::to_string(t) +
                                                " where P never does; KL is undefined");
                }
                ratio_term += q(s, a) * (std::log(q(s, a)) - std::log(p(s, a)));
            }
            total += occupancy[s] * (std::log(model.survival[s]) - ratio_term);
        }
        propagate(model, q, occupancy, next);
        occupancy.swap(next);
    }
    return total;
}

}  // namespace survival
