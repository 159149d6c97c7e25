#pragma once

#include <vector>

#include "survival/mdp.hpp"

namespace survival {

/// Backward survival messages of a time-indexed policy.
///
/// state_values[t][s] = P(A_{t+1..T} = 1 | s_t = s) with state_values[T] = 1,
/// action_values[t] is the [state][action] table
/// q_t(s,a) = sum_{s'} P(s'|s,a) v_{t+1}(s').
struct BackwardMessages {
    std::vector<std::vector<double>> state_values;
    std::vector<PolicyTable> action_values;
};

BackwardMessages backward_messages(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// Posterior policy pi_Q,t(a|s) proportional to pi_t(a|s) q_t(s,a): the law of
/// a_t given s_t under P(tau | A, pi). Rows of states that the prior never
/// reaches at step t are copied from the prior.
///
/// Throws std::runtime_error naming (t, s) if a reachable normalizer underflows.
TimeIndexedPolicy e_step(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// The M-step maximizer of -F(Q(.|pi_Q), P(.|pi)) over pi is pi_Q itself.
TimeIndexedPolicy m_step(TimeIndexedPolicy posterior);

struct EmIteration {
    TimeIndexedPolicy policy;
    double log_likelihood = 0.0;           // log P(A | policy)
    double neg_free_energy_after_m = 0.0;  // -F(policy, policy), equal to T * J_T(policy)
    double kl_after_m = 0.0;               // log_likelihood - neg_free_energy_after_m
};

/// Entry 0 is the initial policy; entry k is the policy after the k-th
/// E/M iteration.
struct EmTrace {
    std::vector<EmIteration> iterations;
    bool converged = false;

    std::size_t iterations_run() const { return iterations.empty() ? 0 : iterations.size() - 1; }
    const EmIteration& final() const { return iterations.back(); }
};

struct EmOptions {
    std::size_t max_iters = 1000;
    double tol = 1e-10;  // max-norm policy change that counts as converged
};

EmTrace run_em(const FiniteMdp& model, const TimeIndexedPolicy& init_policy, std::size_t horizon,
               const EmOptions& options = {});

}  // namespace survival
