#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "survival/mdp.hpp"

/// Brute-force reference values built only on enumerate_trajectories.
/// Every quantity here has a dynamic-programming counterpart elsewhere in
/// the library; the two are compared, never substituted for each other.
namespace survival::oracle {

/// sum_tau P(tau|pi) prod_t survival[s_t]
double survival_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// (1/T) sum_tau P(tau|pi) sum_t log survival[s_t]
double average_reward(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// -F(Q, P(.|pi)) summed over Q's trajectories.
double neg_free_energy(const FiniteMdp& model, const TimeIndexedPolicy& q_policy,
                       const TimeIndexedPolicy& p_policy, std::size_t horizon);

/// P(a_t = a | s_t = s, A) under the survival posterior, per step. Rows of
/// states with zero posterior mass at step t are copied from `policy`.
TimeIndexedPolicy posterior_action_conditional(const FiniteMdp& model, const TimeIndexedPolicy& policy,
                                               std::size_t horizon);

/// max over every deterministic time-indexed policy of log P(A|pi).
double best_deterministic_log_likelihood(const FiniteMdp& model, std::size_t horizon);

}  // namespace survival::oracle

namespace survival {

struct IdentityCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // largest observed violation
    double tolerance = 0.0;
};

/// Runs every probabilistic identity of the planner and the survival
/// quantities against the enumeration oracle on built-in fixtures.
std::vector<IdentityCheck> run_identity_suite(std::uint64_t seed = 20240521);

}  // namespace survival
