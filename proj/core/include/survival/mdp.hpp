#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace survival {

/// Explicit finite MDP with a per-state temporal survival probability
/// P(A_{t+1} = 1 | s_t).
///
/// Tables are stored flat: transition is [state][action][next_state] and
/// policies are [state][action], both row-major.
struct FiniteMdp {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> initial_dist;  // P(s_0)
    std::vector<double> transition;    // P(s'|s,a)
    std::vector<double> survival;      // P(A=1|s), each in (0, 1]

    double p(std::size_t s, std::size_t a, std::size_t next) const {
        return transition[(s * n_actions + a) * n_states + next];
    }
    double& p(std::size_t s, std::size_t a, std::size_t next) {
        return transition[(s * n_actions + a) * n_states + next];
    }
};

/// Stationary stochastic policy pi(a|s).
class PolicyTable {
public:
    PolicyTable() = default;
    PolicyTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
        : n_states_(n_states), n_actions_(n_actions), probs_(n_states * n_actions, fill) {}

    static PolicyTable uniform(std::size_t n_states, std::size_t n_actions);
    /// Deterministic policy that plays actions[s] in state s.
    static PolicyTable deterministic(std::size_t n_actions, const std::vector<std::size_t>& actions);

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }

    double operator()(std::size_t s, std::size_t a) const { return probs_[s * n_actions_ + a]; }
    double& operator()(std::size_t s, std::size_t a) { return probs_[s * n_actions_ + a]; }

    const std::vector<double>& data() const { return probs_; }

    bool operator==(const PolicyTable&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> probs_;
};

/// Non-stationary policy, one table per time step t = 0..T-1.
class TimeIndexedPolicy {
public:
    TimeIndexedPolicy() = default;
    explicit TimeIndexedPolicy(std::vector<PolicyTable> per_step) : per_step_(std::move(per_step)) {}

    /// Promote a stationary policy by replicating it over the horizon.
    static TimeIndexedPolicy replicate(const PolicyTable& policy, std::size_t horizon) {
        return TimeIndexedPolicy(std::vector<PolicyTable>(horizon, policy));
    }

    std::size_t horizon() const { return per_step_.size(); }
    const PolicyTable& at(std::size_t t) const { return per_step_.at(t); }
    PolicyTable& at(std::size_t t) { return per_step_.at(t); }
    const std::vector<PolicyTable>& steps() const { return per_step_; }

    bool operator==(const TimeIndexedPolicy&) const = default;

private:
    std::vector<PolicyTable> per_step_;
};

/// Largest absolute entry-wise difference between two policies of equal shape.
double max_abs_difference(const TimeIndexedPolicy& a, const TimeIndexedPolicy& b);

struct StateTrajectory {
    std::vector<std::size_t> states;   // s_0..s_T
    std::vector<std::size_t> actions;  // a_0..a_{T-1}

    std::size_t horizon() const { return actions.size(); }
    bool operator==(const StateTrajectory&) const = default;
};

struct WeightedTrajectory {
    StateTrajectory trajectory;
    double probability = 0.0;
};

/// Log-probability with an explicit sentinel for impossible events.
struct LogProb {
    double value = 0.0;

    static constexpr LogProb impossible() { return {-std::numeric_limits<double>::infinity()}; }
    bool is_impossible() const { return value == -std::numeric_limits<double>::infinity(); }
};

/// Largest n_states^{T+1} * n_actions^T the enumeration oracle accepts.
inline constexpr double kEnumerationGuard = 1e7;

/// Returns the list of violated invariants; empty when the model is valid.
std::vector<std::string> validate_mdp(const FiniteMdp& model);

/// Throws std::invalid_argument listing every violation when the model is invalid.
void require_valid(const FiniteMdp& model);

/// Same, for a policy that is meant to act on `model` over `horizon` steps.
void require_valid(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon);

/// True when the enumeration size guard admits (model, horizon).
bool within_enumeration_guard(const FiniteMdp& model, std::size_t horizon);

/// Exhaustive enumeration of every positive-probability trajectory under
/// P(tau|pi) = P(s_0) prod_t P(s_{t+1}|s_t,a_t) pi_t(a_t|s_t).
///
/// This is the reference oracle for every probabilistic identity in the
/// library; it shares no code with the dynamic-programming routines.
std::vector<WeightedTrajectory> enumerate_trajectories(const FiniteMdp& model,
                                                       const TimeIndexedPolicy& policy,
                                                       std::size_t horizon);

LogProb trajectory_log_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy,
                            const StateTrajectory& traj);

/// Loads a model from a JSON object with fields n_states, n_actions,
/// initial_dist, transition ([s][a][s'] nested arrays) and survival.
FiniteMdp load_mdp_json(const std::filesystem::path& path);
FiniteMdp parse_mdp_json(const std::string& text);

namespace fixtures {

/// Two states {G, R}, actions {stay, switch}, survival (0.9, 0.5), start in G.
FiniteMdp chain2();

inline constexpr std::size_t kStay = 0;
inline constexpr std::size_t kSwitch = 1;
inline constexpr std::size_t kGreen = 0;
inline constexpr std::size_t kRed = 1;

/// Dense random MDP. With `deterministic_dynamics` every (s, a) leads to one
/// successor and the start state is fixed, which makes the time-indexed
/// Markov family rich enough to represent the survival posterior exactly.
FiniteMdp random_mdp(std::size_t n_states, std::size_t n_actions, std::mt19937_64& rng,
                     bool deterministic_dynamics = false);

/// Random full-support policy, one independent table per time step.
TimeIndexedPolicy random_policy(std::size_t n_states, std::size_t n_actions, std::size_t horizon,
                                std::mt19937_64& rng);

}  // namespace fixtures

}  // namespace survival
