#include "survival/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace survival::oracle {

namespace {

double log_survival_along(const FiniteMdp& model, const StateTrajectory& traj) {
    double total = 0.0;
    for (std::size_t t = 0; t < traj.actions.size(); ++t) total += std::log(model.survival[traj.states[t]]);
    return total;
}

}  // namespace

double survival_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    double total = 0.0;
    for (const auto& [traj, p] : enumerate_trajectories(model, policy, horizon)) {
        double alive = p;
        for (std::size_t t = 0; t < horizon; ++t) alive *= model.survival[traj.states[t]];
        total += alive;
    }
    return total;
}

double average_reward(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    double total = 0.0;
    for (const auto& [traj, p] : enumerate_trajectories(model, policy, horizon))
        total += p * log_survival_along(model, traj);
    return total / static_cast<double>(horizon);
}

double neg_free_energy(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                       const TimeIndexedPolicy& p_policy, std::size_t horizon) {
    double total = 0.0;
    for (const auto& [traj, q] : enumerate_trajectories(model, q_policy, horizon)) {
        const LogProb log_p = trajectory_log_prob(model, p_policy, traj);
        if (log_p.is_impossible()) throw std::invalid_argument("Q is not absolutely continuous w.r.t. P");
        total += q * (log_survival_along(model, traj) - std::log(q) + log_p.value);
    }
    return total;
}

TimeIndexedPolicy posterior_action_conditional(const FiniteMdp& model, const TimeIndexedPolicy& policy,
                                               std::size_t horizon) {
    const std::size_t ns = model.n_states;
    const std::size_t na = model.n_actions;
    std::vector<PolicyTable> joint(horizon, PolicyTable(ns, na));
    for (const auto& [traj, p] : enumerate_trajectories(model, policy, horizon)) {
        const double w = p * std::exp(log_survival_along(model, traj));
        for (std::size_t t = 0; t < horizon; ++t) joint[t](traj.states[t], traj.actions[t]) += w;
    }
    TimeIndexedPolicy out = policy;
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t s = 0; s < ns; ++s) {
            double z = 0.0;
            for (std::size_t a = 0; a < na; ++a) z += joint[t](s, a);
            if (z == 0.0) continue;
            for (std::size_t a = 0; a < na; ++a) out.at(t)(s, a) = joint[t](s, a) / z;
        }
    }
    return out;
}

double best_deterministic_log_likelihood(const FiniteMdp& model, std::size_t horizon) {
    const std::size_t per_step = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(model.n_actions), static_cast<double>(model.n_states))));
    const double combos = std::pow(static_cast<double>(per_step), static_cast<double>(horizon));
    if (combos > 1e6) throw std::invalid_argument("too many deterministic policies to enumerate");

    // Decode a per-step table index into one action per state.
    auto table_for = [&](std::size_t code) {
        std::vector<std::size_t> actions(model.n_states);
        for (auto& a : actions) {
            a = code % model.n_actions;
            code /= model.n_actions;
        }
        return PolicyTable::deterministic(model.n_actions, actions);
    };

    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> codes(horizon, 0);
    while (true) {
        std::vector<PolicyTable> steps;
        for (auto code : codes) steps.push_back(table_for(code));
        best = std::max(best, std::log(survival_prob(model, TimeIndexedPolicy(std::move(steps)), horizon)));

        std::size_t t = 0;
        while (t < horizon && ++codes[t] == per_step) codes[t++] = 0;
        if (t == horizon) break;
    }
    return best;
}

}  // namespace survival::oracle
