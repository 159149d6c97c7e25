#include "survival/sarsa.hpp"

#include <cmath>
#include <stdexcept>

namespace survival {

void validate(const SarsaParams& p) {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(p.alpha)) throw std::invalid_argument("sarsa.alpha must be in [0, 1]");
    if (!unit(p.gamma)) throw std::invalid_argument("sarsa.gamma must be in [0, 1]");
    if (!unit(p.lambda)) throw std::invalid_argument("sarsa.lambda must be in [0, 1]");
    if (!unit(p.epsilon)) throw std::invalid_argument("sarsa.epsilon must be in [0, 1]");
    if (!(p.trace_cutoff >= 0.0)) throw std::invalid_argument("sarsa.trace_cutoff must be non-negative");
}

double TraceTable::get(grid::ObsIndex obs, std::size_t action) const {
    for (const auto& e : entries_)
        if (e.obs == obs && e.action == action) return e.value;
    return 0.0;
}

void TraceTable::replace(grid::ObsIndex obs, std::size_t action) {
    for (auto& e : entries_) {
        if (e.obs == obs && e.action == action) {
            e.value = 1.0;
            return;
        }
    }
    entries_.push_back({obs, static_cast<std::uint8_t>(action), 1.0});
}

void TraceTable::apply_and_decay(QTable& q, double step, double decay, double cutoff) {
    std::size_t kept = 0;
    for (auto& e : entries_) {
        q(e.obs, e.action) += step * e.value;
        e.value *= decay;
        if (e.value > cutoff) entries_[kept++] = e;
    }
    entries_.resize(kept);
}

grid::Action select_action(const QTable& q, grid::ObsIndex obs, double epsilon, Rng& rng) {
    if (uniform01(rng) < epsilon) return static_cast<grid::Action>(uniform_index(rng, grid::kNumActions));

    const double* row = q.row(obs);
    double best = row[0];
    int ties = 1;
    for (int a = 1; a < grid::kNumActions; ++a) {
        if (row[a] > best) {
            best = row[a];
            ties = 1;
        } else if (row[a] == best) {
            ++ties;
        }
    }
    int pick = ties == 1 ? 0 : uniform_index(rng, ties);
    for (int a = 0; a < grid::kNumActions; ++a) {
        if (row[a] == best && pick-- == 0) return static_cast<grid::Action>(a);
    }
    return grid::Action::Eat;  // unreachable
}

void update(QTable& q, TraceTable& traces, grid::ObsIndex obs, grid::Action action, double reward,
            grid::ObsIndex next_obs, grid::Action next_action, bool terminal, const SarsaParams& params) {
    if (!std::isfinite(reward)) throw std::invalid_argument("sarsa update: non-finite reward");
    const auto a = static_cast<std::size_t>(action);
    const double bootstrap = terminal ? 0.0 : params.gamma * q(next_obs, static_cast<std::size_t>(next_action));
    const double delta = reward + bootstrap - q(obs, a);
    traces.replace(obs, a);
    traces.apply_and_decay(q, params.alpha * delta, params.gamma * params.lambda, params.trace_cutoff);
}

}  // namespace survival
