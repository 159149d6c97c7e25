#pragma once

#include "survival/mdp.hpp"

namespace survival {

/// Terms of log P(A|pi) = -F(Q, P(.|pi)) + KL(Q || P(.|A, pi)), all in nats.
struct FreeEnergyBreakdown {
    double neg_free_energy = 0.0;
    double log_likelihood = 0.0;
    double kl_to_posterior = 0.0;
};

/// Reward for a transition whose temporal survival probability is p.
/// Throws std::domain_error unless 0 < p <= 1.
double survival_reward(double p_survive);

/// sum_{t<T} log survival[s_t]; the log-probability of staying alive along `traj`.
double survival_log_likelihood(const FiniteMdp& model, const StateTrajectory& traj);

/// P(A_1 = 1, ..., A_T = 1 | pi) by scaled forward recursion.
double multi_step_survival_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// log of multi_step_survival_prob, accumulated in the log domain so long
/// horizons do not underflow.
double log_multi_step_survival_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy,
                                    std::size_t horizon);

/// J_T(pi) = (1/T) E_pi[ sum_{t<T} log survival[s_t] ], via state-occupancy recursion.
double average_reward_objective(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// Variational decomposition with -F summed explicitly over the trajectories
/// of Q. Requires the enumeration guard. Throws if Q puts mass on a
/// trajectory that is impossible under P(.|pi) since the KL is then undefined.
FreeEnergyBreakdown free_energy_breakdown(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                                          const TimeIndexedPolicy& p_policy, std::size_t horizon);

/// KL(Q || P(.|A, pi)) computed directly against the enumerated posterior.
double kl_to_posterior_direct(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                              const TimeIndexedPolicy& p_policy, std::size_t horizon);

/// -F(Q, P(.|pi)) by forward recursion over Q's state occupancy. Shares the
/// dynamics of both distributions, so only the policy ratio survives:
/// -F = E_Q[ sum_t log survival[s_t] - log pi_Q,t(a_t|s_t) / pi_t(a_t|s_t) ].
double neg_free_energy(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                       const TimeIndexedPolicy& p_policy, std::size_t horizon);

}  // namespace survival
