#include "survival/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace survival {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& obj, const std::string& prefix, const char* key, T& target) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument("config field '" + prefix + key + "' has the wrong type");
    }
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.contains(key)) throw std::invalid_argument("config field '" + prefix + key + "' is not recognised");
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    reject_unknown(doc,
                   {"master_seed", "n_train_episodes", "eval_every", "eval_episodes", "episode_cap", "greedy_eval",
                    "output_dir", "sarsa"},
                   "");

    ExperimentConfig c;
    read_field(doc, "", "master_seed", c.master_seed);
    read_field(doc, "", "n_train_episodes", c.n_train_episodes);
    read_field(doc, "", "eval_every", c.eval_every);
    read_field(doc, "", "eval_episodes", c.eval_episodes);
    read_field(doc, "", "episode_cap", c.episode_cap);
    read_field(doc, "", "greedy_eval", c.greedy_eval);
    std::string out_dir;
    read_field(doc, "", "output_dir", out_dir);
    c.output_dir = out_dir;

    if (doc.contains("sarsa")) {
        const json& s = doc.at("sarsa");
        if (!s.is_object()) throw std::invalid_argument("config field 'sarsa' must be an object");
        reject_unknown(s, {"alpha", "gamma", "lambda", "epsilon", "trace_cutoff"}, "sarsa.");
        read_field(s, "sarsa.", "alpha", c.sarsa.alpha);
        read_field(s, "sarsa.", "gamma", c.sarsa.gamma);
        read_field(s, "sarsa.", "lambda", c.sarsa.lambda);
        read_field(s, "sarsa.", "epsilon", c.sarsa.epsilon);
        read_field(s, "sarsa.", "trace_cutoff", c.sarsa.trace_cutoff);
    }
    validate(c);
    return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

}  // namespace survival
