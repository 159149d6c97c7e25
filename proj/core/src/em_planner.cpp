#include "survival/em_planner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "survival/survival_math.hpp"

namespace survival {

BackwardMessages backward_messages(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    require_valid(model, policy, horizon);
    const std::size_t ns = model.n_states;
    const std::size_t na = model.n_actions;

    BackwardMessages msg;
    msg.state_values.assign(horizon + 1, std::vector<double>(ns, 0.0));
    msg.action_values.assign(horizon, PolicyTable(ns, na));
    std::fill(msg.state_values[horizon].begin(), msg.state_values[horizon].end(), 1.0);

    for (std::size_t t = horizon; t-- > 0;) {
        const auto& v_next = msg.state_values[t + 1];
        PolicyTable& q = msg.action_values[t];
        const PolicyTable& pi = policy.at(t);
        for (std::size_t s = 0; s < ns; ++s) {
            double expected = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                double qa = 0.0;
                for (std::size_t n = 0; n < ns; ++n) qa += model.p(s, a, n) * v_next[n];
                q(s, a) = qa;
                expected += pi(s, a) * qa;
            }
            msg.state_values[t][s] = model.survival[s] * expected;
        }
    }
    return msg;
}

TimeIndexedPolicy e_step(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    const BackwardMessages msg = backward_messages(model, policy, horizon);
    const std::size_t ns = model.n_states;
    const std::size_t na = model.n_actions;

    TimeIndexedPolicy posterior = policy;
    std::vector<double> reach = model.initial_dist;
    std::vector<double> next(ns);
    for (std::size_t t = 0; t < horizon; ++t) {
        const PolicyTable& pi = policy.at(t);
        const PolicyTable& q = msg.action_values[t];
        PolicyTable& out = posterior.at(t);
        for (std::size_t s = 0; s < ns; ++s) {
            if (reach[s] == 0.0) continue;
            double z = 0.0;
            for (std::size_t a = 0; a < na; ++a) z += pi(s, a) * q(s, a);
            if (!(z > 0.0) || !std::isfinite(z)) {
                throw std::runtime_error("e_step: normalizer underflow at step " + std::to_string(t) +
                                         ", state " + std::to_string(s));
            }
            for (std::size_t a = 0; a < na; ++a) out(s, a) = pi(s, a) * q(s, a) / z;
        }

        // Reachability under the prior policy.
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < ns; ++s) {
            if (reach[s] == 0.0) continue;
            for (std::size_t a = 0; a < na; ++a) {
                if (pi(s, a) == 0.0) continue;
                for (std::size_t n = 0; n < ns; ++n)
                    if (model.p(s, a, n) > 0.0) next[n] = 1.0;
            }
        }
        reach.swap(next);
    }
    return posterior;
}

TimeIndexedPolicy m_step(TimeIndexedPolicy posterior) { return posterior; }

namespace {

EmIteration record(const FiniteMdp& model, TimeIndexedPolicy policy, std::size_t horizon) {
    EmIteration it;
    it.log_likelihood = log_multi_step_survival_prob(model, policy, horizon);
    it.neg_free_energy_after_m = neg_free_energy(model, policy, policy, horizon);
    it.kl_after_m = it.log_likelihood - it.neg_free_energy_after_m;
    it.policy = std::move(policy);
    return it;
}

}  // namespace

EmTrace run_em(const FiniteMdp& model, const TimeIndexedPolicy& init_policy, std::size_t horizon,
               const EmOptions& options) {
    if (options.max_iters < 1) throw std::invalid_argument("run_em: max_iters must be at least 1");
    if (!(options.tol > 0.0)) throw std::invalid_argument("run_em: tol must be positive");
    require_valid(model, init_policy, horizon);

    EmTrace trace;
    trace.iterations.push_back(record(model, init_policy, horizon));
    for (std::size_t k = 0; k < options.max_iters; ++k) {
        const TimeIndexedPolicy& current = trace.iterations.back().policy;
        TimeIndexedPolicy updated = m_step(e_step(model, current, horizon));
        const double change = max_abs_difference(updated, current);
        trace.iterations.push_back(record(model, std::move(updated), horizon));
        if (change < options.tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

}  // namespace survival
