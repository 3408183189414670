#pragma once

#include <utility>
#include <vector>

#include "lawn/geometry.hpp"

namespace lawn {

// Rotary-wing propulsion model constants. Power defaults follow the reported
// measurement set; drag/density/solidity use standard literature values and
// are overridable from config.
struct PropulsionConstants {
    double blade_profile_power = 59.03;  // W
    double induced_hover_power = 79.07;  // W
    double tip_speed = 120.0;            // m/s
    double mean_rotor_speed = 3.6;       // m/s
    double drag_coefficient = 0.6;
    double air_density = 1.225;  // kg/m^3
    double rotor_solidity = 0.05;
    double rotor_disk_area = 0.5030;  // m^2

    void validate() const;
};

struct MotionLimits {
    double v_max = 20.0;  // m/s
    double a_max = 5.0;   // m/s^2
    double d_min = 3.0;   // m, inter-UAV safety distance
};

struct UavState {
    Vec3 position;
    Vec3 velocity;
    double residual_energy = 20000.0;  // J
    bool alive = true;
    int capacity = 10;         // max associated users
    double power_budget = 1.0; // W, transmit
    int array_rows = 4;
    int array_cols = 4;

    int antennas() const { return array_rows * array_cols; }
};

// Constant-acceleration slot update. Commands beyond the limits are radially
// rescaled, never rejected, so a learner cannot crash the simulation.
// Returns (position', velocity').
std::pair<Vec3, Vec3> step_kinematics(Vec3 q, Vec3 v, Vec3 a_cmd, double dt,
                                      const MotionLimits& lim);

// Three-term rotary-wing power: parasite + blade profile + induced.
double propulsion_power(Vec3 v, const PropulsionConstants& c);

// Energy bookkeeping for one slot; flips alive to false at depletion.
// Calling on a dead UAV is a contract violation.
UavState consume_and_update(const UavState& s, double p_fly, double dt);

// All unordered pairs strictly closer than d_min.
std::vector<std::pair<int, int>> pairwise_separation_violations(
    const std::vector<UavState>& states, double d_min);

}  // namespace lawn
