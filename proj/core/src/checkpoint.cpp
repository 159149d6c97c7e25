#include "survival/checkpoint.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace survival {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("checkpoint line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, std::string_view field) {
    T value{};
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(line, "cannot parse " + std::string(field) + " from '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
    out << kCheckpointVersion << '\n';
    out << "alpha=" << format_double(c.params.alpha) << " gamma=" << format_double(c.params.gamma)
        << " lambda=" << format_double(c.params.lambda) << " epsilon=" << format_double(c.params.epsilon)
        << " trace_cutoff=" << format_double(c.params.trace_cutoff) << " episodes_trained=" << c.episodes_trained
        << " master_seed=" << c.master_seed << '\n';
    const auto& values = c.q.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) continue;
        out << i / QTable::kActions << ' ' << i % QTable::kActions << ' ' << format_double(values[i]) << '\n';
    }
}

Checkpoint read_checkpoint(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) fail(line_no, "missing version header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCheckpointVersion) fail(line_no, "unsupported checkpoint version '" + line + "'");

    Checkpoint c;
    ++line_no;
    if (!std::getline(in, line)) fail(line_no, "missing metadata line");
    std::map<std::string, std::string_view, std::less<>> meta;
    for (auto token : split_ws(line)) {
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) fail(line_no, "malformed metadata token '" + std::string(token) + "'");
        meta[std::string(token.substr(0, eq))] = token.substr(eq + 1);
    }
    auto field = [&](const char* name) {
        const auto it = meta.find(name);
        if (it == meta.end()) fail(line_no, std::string("missing metadata field ") + name);
        return it->second;
    };
    c.params.alpha = parse_number<double>(field("alpha"), line_no, "alpha");
    c.params.gamma = parse_number<double>(field("gamma"), line_no, "gamma");
    c.params.lambda = parse_number<double>(field("lambda"), line_no, "lambda");
    c.params.epsilon = parse_number<double>(field("epsilon"), line_no, "epsilon");
    c.params.trace_cutoff = parse_number<double>(field("trace_cutoff"), line_no, "trace_cutoff");
    c.episodes_trained = parse_number<std::int64_t>(field("episodes_trained"), line_no, "episodes_trained");
    c.master_seed = parse_number<std::uint64_t>(field("master_seed"), line_no, "master_seed");

    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 3) fail(line_no, "expected 'obs action value'");
        const auto obs = parse_number<std::uint32_t>(tokens[0], line_no, "observation index");
        const auto action = parse_number<std::uint32_t>(tokens[1], line_no, "action");
        const auto value = parse_number<double>(tokens[2], line_no, "value");
        if (obs >= grid::kNumObservations) fail(line_no, "observation index out of range");
        if (action >= QTable::kActions) fail(line_no, "action out of range");
        if (!std::isfinite(value)) fail(line_no, "non-finite value");
        c.q(obs, action) = value;
    }
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    std::ostringstream buffer;
    write_checkpoint(buffer, ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << buffer.str();
    if (!out.flush()) throw std::runtime_error("write failed on " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
    try {
        return read_checkpoint(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace survival
