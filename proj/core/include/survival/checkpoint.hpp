#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "survival/sarsa.hpp"

namespace survival {

inline constexpr const char* kCheckpointVersion = "SURVIVAL-RL-QTABLE v1";

/// Text checkpoint:
///
///   SURVIVAL-RL-QTABLE v1
///   alpha=.. gamma=.. lambda=.. epsilon=.. trace_cutoff=.. episodes_trained=.. master_seed=..
///   <obs> <action> <value>      (one line per nonzero entry, ascending)
///
/// Values are printed with enough digits to round-trip bit-exactly.
struct Checkpoint {
    SarsaParams params;
    std::int64_t episodes_trained = 0;
    std::uint64_t master_seed = 0;
    QTable q;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace survival
