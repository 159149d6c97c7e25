#include "survival/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace survival {

namespace {

constexpr double kRowTolerance = 1e-12;

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += "; ";
        out += item;
    }
    return out;
}

void check_policy_table(const PolicyTable& table, std::size_t n_states, std::size_t n_actions,
                        const std::string& where, std::vector<std::string>& report) {
    if (table.n_states() != n_states || table.n_actions() != n_actions) {
        report.push_back(where + ": shape mismatch");
        return;
    }
    for (std::size_t s = 0; s < n_states; ++s) {
        double sum = 0.0;
        for (std::size_t a = 0; a < n_actions; ++a) {
            const double p = table(s, a);
            if (!(p >= 0.0)) report.push_back(where + ": negative entry at state " + std::to_string(s));
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowTolerance) {
            report.push_back(where + ": row for state " + std::to_string(s) + " sums to " +
                             std::to_string(sum));
        }
    }
}

}  // namespace

PolicyTable PolicyTable::uniform(std::size_t n_states, std::size_t n_actions) {
    return PolicyTable(n_states, n_actions, 1.0 / static_cast<double>(n_actions));
}

PolicyTable PolicyTable::deterministic(std::size_t n_actions, const std::vector<std::size_t>& actions) {
    PolicyTable table(actions.size(), n_actions);
    for (std::size_t s = 0; s < actions.size(); ++s) table(s, actions[s]) = 1.0;
    return table;
}

double max_abs_difference(const TimeIndexedPolicy& a, const TimeIndexedPolicy& b) {
    if (a.horizon() != b.horizon()) throw std::invalid_argument("policy horizons differ");
    double worst = 0.0;
    for (std::size_t t = 0; t < a.horizon(); ++t) {
        const auto& x = a.at(t).data();
        const auto& y = b.at(t).data();
        if (x.size() != y.size()) throw std::invalid_argument("policy shapes differ");
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

std::vector<std::string> validate_mdp(const FiniteMdp& model) {
    std::vector<std::string> report;
    const std::size_t ns = model.n_states;
    const std::size_t na = model.n_actions;
    if (ns == 0) report.emplace_back("n_states must be positive");
    if (na == 0) report.emplace_back("n_actions must be positive");
    if (!report.empty()) return report;

    if (model.initial_dist.size() != ns) {
        report.emplace_back("initial_dist has wrong length");
    } else {
        double sum = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            if (!(model.initial_dist[s] >= 0.0))
                report.push_back("initial_dist: negative entry at state " + std::to_string(s));
            sum += model.initial_dist[s];
        }
        if (std::abs(sum - 1.0) > kRowTolerance)
            report.push_back("initial_dist sums to " + std::to_string(sum));
    }

    if (model.transition.size() != ns * na * ns) {
        report.emplace_back("transition has wrong size");
    } else {
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t a = 0; a < na; ++a) {
                double sum = 0.0;
                bool negative = false;
                for (std::size_t n = 0; n < ns; ++n) {
                    const double p = model.p(s, a, n);
                    negative = negative || !(p >= 0.0);
                    sum += p;
                }
                const std::string row = "transition row (state " + std::to_string(s) + ", action " +
                                        std::to_string(a) + ")";
                if (negative) report.push_back(row + " has a negative entry");
                if (std::abs(sum - 1.0) > kRowTolerance)
                    report.push_back(row + " sums to " + std::to_string(sum));
            }
        }
    }

    if (model.survival.size() != ns) {
        report.emplace_back("survival has wrong length");
    } else {
        for (std::size_t s = 0; s < ns; ++s) {
            const double p = model.survival[s];
            if (!(p > 0.0))
                report.push_back("non-positive survival probability at state " + std::to_string(s));
            else if (p > 1.0)
                report.push_back("survival probability above 1 at state " + std::to_string(s));
        }
    }
    return report;
}

void require_valid(const FiniteMdp& model) {
    const auto report = validate_mdp(model);
    if (!report.empty()) throw std::invalid_argument("invalid model: " + join(report));
}

void require_valid(const FiniteMdp& model, const TimeIndexedPolicy& policy, std::size_t horizon) {
    require_valid(model);
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (policy.horizon() != horizon) {
        throw std::invalid_argument("policy covers " + std::to_string(policy.horizon()) +
                                    " steps, horizon is " + std::to_string(horizon));
    }
    std::vector<std::string> report;
    for (std::size_t t = 0; t < horizon; ++t) {
        check_policy_table(policy.at(t), model.n_states, model.n_actions,
                           "policy step " + std::to_string(t), report);
    }
    if (!report.empty()) throw std::invalid_argument("invalid policy: " + join(report));
}

bool within_enumeration_guard(const FiniteMdp& model, std::size_t horizon) {
    const double size = std::pow(static_cast<double>(model.n_states), static_cast<double>(horizon + 1)) *
                        std::pow(static_cast<double>(model.n_actions), static_cast<double>(horizon));
    return size <= kEnumerationGuard;
}

std::vector<WeightedTrajectory> enumerate_trajectories(const FiniteMdp& model,
                                                       const TimeIndexedPolicy& policy,
                                                       std::size_t horizon) {
    require_valid(model, policy, horizon);
    if (!within_enumeration_guard(model, horizon)) {
        throw std::invalid_argument("enumeration refused: n_states^(T+1) * n_actions^T exceeds " +
                                    std::to_string(static_cast<long long>(kEnumerationGuard)));
    }

    std::vector<WeightedTrajectory> out;
    StateTrajectory current;
    current.states.reserve(horizon + 1);
    current.actions.reserve(horizon);

    // Depth-first over (a_t, s_{t+1}) pairs, pruning zero-probability branches.
    auto extend = [&](auto&& self, double prob) -> void {
        const std::size_t t = current.actions.size();
        if (t == horizon) {
            out.push_back({current, prob});
            return;
        }
        const std::size_t s = current.states.back();
        for (std::size_t a = 0; a < model.n_actions; ++a) {
            const double pa = policy.at(t)(s, a);
            if (pa == 0.0) continue;
            for (std::size_t next = 0; next < model.n_states; ++next) {
                const double pn = model.p(s, a, next);
                if (pn == 0.0) continue;
                current.actions.push_back(a);
                current.states.push_back(next);
                self(self, prob * pa * pn);
                current.actions.pop_back();
                current.states.pop_back();
            }
        }
    };

    for (std::size_t s0 = 0; s0 < model.n_states; ++s0) {
        if (model.initial_dist[s0] == 0.0) continue;
        current.states.assign(1, s0);
        current.actions.clear();
        extend(extend, model.initial_dist[s0]);
    }
    return out;
}

LogProb trajectory_log_prob(const FiniteMdp& model, const TimeIndexedPolicy& policy,
                            const StateTrajectory& traj) {
    const std::size_t horizon = traj.actions.size();
    if (traj.states.size() != horizon + 1) throw std::invalid_argument("trajectory length mismatch");
    if (policy.horizon() < horizon) throw std::invalid_argument("policy shorter than trajectory");
    for (auto s : traj.states)
        if (s >= model.n_states) throw std::out_of_range("trajectory state index out of range");
    for (auto a : traj.actions)
        if (a >= model.n_actions) throw std::out_of_range("trajectory action index out of range");

    double p0 = model.initial_dist[traj.states[0]];
    if (p0 == 0.0) return LogProb::impossible();
    double log_p = std::log(p0);
    for (std::size_t t = 0; t < horizon; ++t) {
        const double pa = policy.at(t)(traj.states[t], traj.actions[t]);
        const double pn = model.p(traj.states[t], traj.actions[t], traj.states[t + 1]);
        if (pa == 0.0 || pn == 0.0) return LogProb::impossible();
        log_p += std::log(pa) + std::log(pn);
    }
    return {log_p};
}

FiniteMdp parse_mdp_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model file is not valid JSON: ") + e.what());
    }
    auto field = [&](const char* name) -> const json& {
        if (!doc.contains(name)) throw std::invalid_argument(std::string("model file: missing field '") + name + "'");
        return doc.at(name);
    };

    FiniteMdp model;
    try {
        model.n_states = field("n_states").get<std::size_t>();
        model.n_actions = field("n_actions").get<std::size_t>();
        model.initial_dist = field("initial_dist").get<std::vector<double>>();
        model.survival = field("survival").get<std::vector<double>>();
        const auto nested = field("transition").get<std::vector<std::vector<std::vector<double>>>>();
        if (nested.size() != model.n_states)
            throw std::invalid_argument("model file: 'transition' must have n_states rows");
        model.transition.assign(model.n_states * model.n_actions * model.n_states, 0.0);
        for (std::size_t s = 0; s < model.n_states; ++s) {
            if (nested[s].size() != model.n_actions)
                throw std::invalid_argument("model file: 'transition' state " + std::to_string(s) +
                                            " must have n_actions rows");
            for (std::size_t a = 0; a < model.n_actions; ++a) {
                if (nested[s][a].size() != model.n_states)
                    throw std::invalid_argument("model file: 'transition' row (" + std::to_string(s) +
                                                "," + std::to_string(a) + ") must have n_states entries");
                for (std::size_t n = 0; n < model.n_states; ++n) model.p(s, a, n) = nested[s][a][n];
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model file: ") + e.what());
    }
    require_valid(model);
    return model;
}

FiniteMdp load_mdp_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_mdp_json(buffer.str());
}

namespace fixtures {

FiniteMdp chain2() {
    FiniteMdp m;
    m.n_states = 2;
    m.n_actions = 2;
    m.initial_dist = {1.0, 0.0};
    m.survival = {0.9, 0.5};
    m.transition.assign(8, 0.0);
    m.p(kGreen, kStay, kGreen) = 1.0;
    m.p(kGreen, kSwitch, kRed) = 1.0;
    m.p(kRed, kStay, kRed) = 1.0;
    m.p(kRed, kSwitch, kGreen) = 1.0;
    return m;
}

namespace {

std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) sum += (x = unit(rng));
    for (auto& x : v) x /= sum;
    return v;
}

}  // namespace

FiniteMdp random_mdp(std::size_t n_states, std::size_t n_actions, std::mt19937_64& rng,
                     bool deterministic_dynamics) {
    FiniteMdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.transition.assign(n_states * n_actions * n_states, 0.0);
    std::uniform_int_distribution<std::size_t> pick(0, n_states - 1);
    if (deterministic_dynamics) {
        m.initial_dist.assign(n_states, 0.0);
        m.initial_dist[pick(rng)] = 1.0;
        for (std::size_t s = 0; s < n_states; ++s)
            for (std::size_t a = 0; a < n_actions; ++a) m.p(s, a, pick(rng)) = 1.0;
    } else {
        m.initial_dist = random_simplex(n_states, rng);
        for (std::size_t s = 0; s < n_states; ++s) {
            for (std::size_t a = 0; a < n_actions; ++a) {
                const auto row = random_simplex(n_states, rng);
                for (std::size_t n = 0; n < n_states; ++n) m.p(s, a, n) = row[n];
            }
        }
    }
    std::uniform_real_distribution<double> surv(0.2, 1.0);
    m.survival.resize(n_states);
    for (auto& p : m.survival) p = surv(rng);
    return m;
}

TimeIndexedPolicy random_policy(std::size_t n_states, std::size_t n_actions, std::size_t horizon,
                                std::mt19937_64& rng) {
    std::vector<PolicyTable> steps;
    steps.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        PolicyTable table(n_states, n_actions);
        for (std::size_t s = 0; s < n_states; ++s) {
            const auto row = random_simplex(n_actions, rng);
            for (std::size_t a = 0; a < n_actions; ++a) table(s, a) = row[a];
        }
        steps.push_back(std::move(table));
    }
    return TimeIndexedPolicy(std::move(steps));
}

}  // namespace fixtures

}  // namespace survival
