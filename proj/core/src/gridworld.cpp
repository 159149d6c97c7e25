#include "survival/gridworld.hpp"

#include "survival/survival_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace survival::grid {

namespace {

// Uniform cell other than `excluded`.
int uniform_cell_except(Rng& rng, int excluded) {
    const int r = uniform_index(rng, kCells - 1);
    return r < excluded ? r : r + 1;
}

// Uniform cell other than two distinct excluded cells.
int uniform_cell_except(Rng& rng, int excluded_a, int excluded_b) {
    int lo = std::min(excluded_a, excluded_b);
    int hi = std::max(excluded_a, excluded_b);
    int r = uniform_index(rng, kCells - 2);
    if (r >= lo) ++r;
    if (r >= hi) ++r;
    return r;
}

}  // namespace

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Up: return "UP";
        case Action::Down: return "DOWN";
        case Action::Right: return "RIGHT";
        case Action::Left: return "LEFT";
        case Action::Eat: return "EAT";
    }
    return "?";
}

double f_battery(double battery) {
    if (!(battery >= 0.0 && battery <= kBatteryMax)) {
        throw std::domain_error("battery level out of [0, 100]: " + std::to_string(battery));
    }
    const double d = battery - kBatteryOptimum;
    return std::exp(-d * d / 1000.0);
}

double g_poison(bool poison_flag) { return poison_flag ? 0.5 : 1.0; }

double survival_probability(const GridState& state) {
    return f_battery(state.battery) * g_poison(state.poison_flag);
}

int discretize_battery(double battery) {
    if (!(battery >= 0.0 && battery <= kBatteryMax)) {
        throw std::domain_error("battery level out of [0, 100]: " + std::to_string(battery));
    }
    return std::min(static_cast<int>(battery / 5.0), kBatteryBins - 1);
}

ObsIndex encode_observation(const GridObservation& o) {
    auto in = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
    if (!in(o.x, 0, kCells - 1) || !in(o.p_a, 0, kCells - 1) || !in(o.p_b, 0, kCells - 1) || !in(o.c, 1, 3) ||
        !in(o.e_bin, 0, kBatteryBins - 1)) {
        throw std::out_of_range("observation field out of range");
    }
    return static_cast<ObsIndex>(o.x + kCells * (o.p_a + kCells * (o.p_b + kCells * ((o.c - 1) + 3 * o.e_bin))));
}

GridObservation decode_observation(ObsIndex index) {
    if (index >= kNumObservations) throw std::out_of_range("observation index out of range");
    GridObservation o;
    auto take = [&index](ObsIndex radix) {
        const int v = static_cast<int>(index % radix);
        index /= radix;
        return v;
    };
    o.x = take(kCells);
    o.p_a = take(kCells);
    o.p_b = take(kCells);
    o.c = take(3) + 1;
    o.e_bin = static_cast<int>(index);
    return o;
}

GridObservation observe(const GridState& s) {
    return {s.agent_pos, s.food_pos, s.poison_pos, static_cast<int>(s.last_eat), discretize_battery(s.battery)};
}

bool is_valid(const GridState& s) {
    auto cell = [](int c) { return c >= 0 && c < kCells; };
    const int c = static_cast<int>(s.last_eat);
    return cell(s.agent_pos) && cell(s.food_pos) && cell(s.poison_pos) && s.food_pos != s.poison_pos &&
           s.battery >= 0.0 && s.battery <= kBatteryMax && c >= 1 && c <= 3;
}

GridState reset(Rng& rng) {
    GridState s;
    s.agent_pos = uniform_index(rng, kCells);
    s.food_pos = uniform_index(rng, kCells);
    s.poison_pos = uniform_cell_except(rng, s.food_pos);
    s.battery = kBatteryStart;
    s.poison_flag = false;
    s.last_eat = LastEat::Nothing;
    return s;
}

int move(int cell, Action action) {
    const int row = cell / kSide;
    const int col = cell % kSide;
    switch (action) {
        case Action::Up: return row > 0 ? cell - kSide : cell;
        case Action::Down: return row < kSide - 1 ? cell + kSide : cell;
        case Action::Right: return col < kSide - 1 ? cell + 1 : cell;
        case Action::Left: return col > 0 ? cell - 1 : cell;
        case Action::Eat: return cell;
    }
    return cell;
}

StepOutcome step(const GridState& state, Action action, Rng& rng) {
    StepOutcome out;

    out.p_survive = survival_probability(state);
    out.reward = survival_reward(out.p_survive);
    out.alive = uniform01(rng) < out.p_survive;

    GridState next = state;
    next.agent_pos = move(state.agent_pos, action);

    next.last_eat = LastEat::Nothing;
    next.poison_flag = false;
    if (action == Action::Eat && next.agent_pos == next.food_pos) {
        next.battery += kRecharge;
        next.food_pos = uniform_cell_except(rng, next.poison_pos);
        next.last_eat = LastEat::Food;
    } else if (action == Action::Eat && next.agent_pos == next.poison_pos) {
        next.poison_flag = true;
        next.poison_pos = uniform_cell_except(rng, next.food_pos);
        next.last_eat = LastEat::Poison;
    }

    next.battery = std::clamp(next.battery - kDecay, 0.0, kBatteryMax);

    if (uniform01(rng) < kPoisonDrift) next.poison_pos = uniform_cell_except(rng, next.food_pos, next.poison_pos);

    out.next_state = next;
    out.observation = observe(next);
    return out;
}

}  // namespace survival::grid
