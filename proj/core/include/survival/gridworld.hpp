#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "survival/rng.hpp"

namespace survival::grid {

// 3x3 board, cells numbered row-major from the top-left corner.
inline constexpr int kSide = 3;
inline constexpr int kCells = kSide * kSide;

inline constexpr double kBatteryMax = 100.0;
inline constexpr double kBatteryStart = 60.0;
inline constexpr double kBatteryOptimum = 60.0;
inline constexpr double kRecharge = 5.0;
inline constexpr double kDecay = 1.0;
inline constexpr double kPoisonDrift = 0.01;
inline constexpr int kBatteryBins = 20;

inline constexpr int kNumActions = 5;
enum class Action : std::uint8_t { Up = 0, Down = 1, Right = 2, Left = 3, Eat = 4 };

inline constexpr std::array<Action, kNumActions> kAllActions = {Action::Up, Action::Down, Action::Right,
                                                                Action::Left, Action::Eat};

std::string_view to_string(Action a);

/// What the agent consumed on its last step. Values match the observed code c.
enum class LastEat : std::uint8_t { Nothing = 1, Food = 2, Poison = 3 };

struct GridState {
    int agent_pos = 0;
    int food_pos = 0;    // object A
    int poison_pos = 1;  // object B
    double battery = kBatteryStart;
    bool poison_flag = false;
    LastEat last_eat = LastEat::Nothing;

    bool operator==(const GridState&) const = default;
};

struct GridObservation {
    int x = 0;
    int p_a = 0;
    int p_b = 0;
    int c = 1;      // 1 nothing, 2 food, 3 poison
    int e_bin = 0;  // discretized battery

    bool operator==(const GridObservation&) const = default;
};

using ObsIndex = std::uint32_t;
inline constexpr ObsIndex kNumObservations = kCells * kCells * kCells * 3 * kBatteryBins;  // 43740

struct StepOutcome {
    GridState next_state;
    GridObservation observation;
    double reward = 0.0;  // log p_survive
    bool alive = true;
    double p_survive = 1.0;
};

/// exp(-(E - 60)^2 / 1000). Throws std::domain_error outside [0, 100].
double f_battery(double battery);

/// 0.5 right after eating poison, 1 otherwise.
double g_poison(bool poison_flag);

/// Temporal survival probability of a pre-action state.
double survival_probability(const GridState& state);

/// Bin index floor(E / 5) with E = 100 folded into the last bin.
int discretize_battery(double battery);

ObsIndex encode_observation(const GridObservation& obs);
GridObservation decode_observation(ObsIndex index);

GridObservation observe(const GridState& state);

bool is_valid(const GridState& state);

/// Fresh episode: battery at the optimum, agent and objects placed uniformly
/// with the objects on distinct cells.
GridState reset(Rng& rng);

/// Cell reached by a movement action; walls leave the agent in place.
int move(int cell, Action action);

/// One transition. Draw order is fixed: survival draw from the pre-action
/// state, relocation of an eaten object, then the poison drift draw.
StepOutcome step(const GridState& state, Action action, Rng& rng);

}  // namespace survival::grid
