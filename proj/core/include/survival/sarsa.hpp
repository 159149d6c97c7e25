#pragma once

#include <cstdint>
#include <vector>

#include "survival/gridworld.hpp"
#include "survival/rng.hpp"

namespace survival {

struct SarsaParams {
    double alpha = 0.1;
    double gamma = 0.95;
    double lambda = 0.1;
    double epsilon = 0.01;
    double trace_cutoff = 1e-4;

    bool operator==(const SarsaParams&) const = default;
};

/// Throws std::invalid_argument unless every field is in [0, 1] and the
/// cutoff is non-negative.
void validate(const SarsaParams& params);

/// Tabular action values over encoded grid observations, initialized to 0.
class QTable {
public:
    static constexpr std::size_t kActions = grid::kNumActions;

    QTable() : values_(static_cast<std::size_t>(grid::kNumObservations) * kActions, 0.0) {}

    double operator()(grid::ObsIndex obs, std::size_t action) const { return values_[obs * kActions + action]; }
    double& operator()(grid::ObsIndex obs, std::size_t action) { return values_[obs * kActions + action]; }

    const double* row(grid::ObsIndex obs) const { return values_.data() + obs * kActions; }

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const QTable&) const = default;

private:
    std::vector<double> values_;
};

/// Sparse replacing eligibility traces. Live entries lie in (cutoff, 1].
class TraceTable {
public:
    struct Entry {
        grid::ObsIndex obs;
        std::uint8_t action;
        double value;
    };

    void clear() { entries_.clear(); }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Current trace of (obs, action), 0 when absent.
    double get(grid::ObsIndex obs, std::size_t action) const;

    /// Sets the trace of (obs, action) to 1.
    void replace(grid::ObsIndex obs, std::size_t action);

    /// Applies Q += step * e for every trace, then decays every trace by
    /// `decay` and drops those at or below `cutoff`.
    void apply_and_decay(QTable& q, double step, double decay, double cutoff);

private:
    std::vector<Entry> entries_;
};

/// epsilon-greedy over Q(obs, .) with uniform tie-breaking among maximizers.
grid::Action select_action(const QTable& q, grid::ObsIndex obs, double epsilon, Rng& rng);

/// One Sarsa(lambda) backup. `terminal` transitions bootstrap with 0.
/// Throws std::invalid_argument on a non-finite reward.
void update(QTable& q, TraceTable& traces, grid::ObsIndex obs, grid::Action action, double reward,
            grid::ObsIndex next_obs, grid::Action next_action, bool terminal, const SarsaParams& params);

inline void reset_traces(TraceTable& traces) { traces.clear(); }

}  // namespace survival
