#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lawn/beamforming.hpp"
#include "lawn/channel.hpp"
#include "lawn/dynamics.hpp"
#include "lawn/scenario.hpp"
#include "lawn/service.hpp"

namespace lawn {

struct SatisfactionParams {
    double shaping_c = 8.0;  // must exceed 7
    bool resample_urgency_per_slot = false;
};

struct RewardWeights {
    double bounds = 0.01;       // 1/m^2
    double cylinder = 0.01;     // 1/m^2
    double rectangle = 0.01;    // 1/m^2
    double separation = 1.0;
    double bonus_cylinder = 0.1;   // 1/m
    double bonus_rectangle = 0.1;  // 1/m
    double safe_margin_cylinder = 10.0;  // m
    Vec2 safe_margin_rectangle{10.0, 10.0};
};

struct FleetConfig {
    int count = 3;
    int capacity = 10;
    double power_budget = 1.0;  // W
    int array_rows = 4;
    int array_cols = 4;
    double energy_init = 20000.0;  // J

    int antennas() const { return array_rows * array_cols; }
};

// How users are materialized at reset: explicit devices from config, fixed
// positions with per-episode tier draws, or fully uniform placement.
struct UserConfig {
    int count = 30;
    std::vector<Vec2> positions;       // optional; size 0 means uniform
    std::vector<UserDevice> explicit_users;  // fully pinned; overrides the rest
    std::vector<UrgencyTier> tiers = {
        {0.5e-6, 1e6, 1.0}, {1.0e-6, 2e6, 1.0}, {2.0e-6, 4e6, 1.0}};
};

struct EnvConfig {
    Workspace workspace;
    std::vector<CylindricalObstacle> cylinders;
    std::vector<RectangularObstacle> rectangles;
    UserConfig users;
    FleetConfig fleet;
    MotionLimits limits;
    PropulsionConstants propulsion;
    ChannelParams channel;
    SatisfactionParams satisfaction;
    RewardWeights reward;
    int horizon = 200;       // slots per episode
    double slot_seconds = 1.0;
    double beam_eps_rel = 1e-6;
    bool eq23_literal = false;
    bool equal_beam = false;  // baseline: substitute equal beamforming
    double condition_limit = 1e12;
    bool strict_capacity = true;  // reject sum K_n < K at validation

    // baseline hooks: pinned spawn points (one per UAV) instead of random
    // placement, and distance-score association instead of the action's choices
    std::vector<Vec3> spawn_positions;
    bool distance_association = false;

    int n_users() const {
        if (!users.explicit_users.empty()) return static_cast<int>(users.explicit_users.size());
        if (!users.positions.empty()) return static_cast<int>(users.positions.size());
        return users.count;
    }
    void validate() const;
};

// Hybrid action: one raw acceleration 3-vector per UAV (components expected in
// [-1, 1]; decoded by scaling to a_max and radial rescale) plus one UAV choice
// per user.
struct Action {
    std::vector<double> accel;       // 3 * N
    std::vector<int> assoc_choice;   // K, entries in [0, N)
};

struct RewardBreakdown {
    double s_total = 0.0;
    double penalty_bounds = 0.0;
    double penalty_cylinder = 0.0;
    double penalty_rectangle = 0.0;
    double penalty_separation = 0.0;
    double bonus = 0.0;

    double total() const {
        return s_total - penalty_bounds - penalty_cylinder - penalty_rectangle -
               penalty_separation + bonus;
    }
};

struct SlotDiagnostics {
    int slot = 0;
    RewardBreakdown reward;
    std::vector<double> rates;   // per user, bit/s (0 when unserved)
    std::vector<double> sat;     // per user S
    std::vector<int> serving;    // per user UAV index, -1 when unserved
    int boundary_violations = 0;
    int obstacle_violations = 0;
    int separation_violations = 0;
    int failures_this_slot = 0;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
    SlotDiagnostics diag;
};

// Reward shaping shared by the environment and its tests. Only alive UAVs are
// penalized; obstacle terms apply at z <= obstacle height (flying over is
// free). The approach bonus fires per (UAV, served user inside obstacle o)
// pair while the UAV stands in the band within the safety margin of o.
RewardBreakdown compute_reward(const std::vector<UavState>& states,
                               const AssociationMatrix& assoc, double s_total,
                               const Workspace& workspace,
                               const std::vector<CylindricalObstacle>& cylinders,
                               const std::vector<RectangularObstacle>& rectangles,
                               const std::vector<UserDevice>& users,
                               const RewardWeights& w, double d_min);

// Observation layout, version 1:
//   per UAV (8):  x/x_max, y/y_max, (z-h_min)/(h_max-h_min),
//                 vx/v_max, vy/v_max, vz/v_max, E_res/E_init, alive
//   per user (5): x/x_max, y/y_max, urgency/urgency_norm,
//                 target_rate/rate_norm, inside-obstacle flag
// UAV blocks first (0..N-1), then user blocks (0..K-1).
inline constexpr int kObservationLayoutVersion = 1;

class Environment {
public:
    Environment(EnvConfig cfg, std::uint64_t seed);

    int obs_dim() const { return 8 * n_uavs_ + 5 * n_users_; }
    int n_uavs() const { return n_uavs_; }
    int n_users() const { return n_users_; }
    const EnvConfig& config() const { return cfg_; }

    std::vector<double> reset();             // next episode index
    std::vector<double> reset(int episode);  // explicit episode index
    StepResult step(const Action& action);

    // decoded (clamped accelerations, repaired association); exposed for tests
    std::pair<std::vector<Vec3>, AssociationMatrix> decode_action(const Action& action) const;

    bool done() const { return done_; }
    int slot() const { return slot_; }
    int episode() const { return episode_; }
    const std::vector<UavState>& uav_states() const { return uavs_; }
    const std::vector<UserDevice>& users() const { return episode_users_; }
    const AssociationMatrix& association() const { return assoc_; }

    // fault injection for failure-handling tests
    void set_residual_energy(int uav, double joules);

    std::vector<double> observe() const;

private:
    EnvConfig cfg_;
    std::uint64_t seed_;
    int n_uavs_;
    int n_users_;
    double urgency_norm_ = 1.0;
    double rate_norm_ = 1.0;

    int episode_ = -1;
    int slot_ = 0;
    bool done_ = true;
    std::vector<UavState> uavs_;
    std::vector<UserDevice> episode_users_;
    AssociationMatrix assoc_;

    void place_users(Rng& rng);
    void sample_tiers(Rng& rng);
};

}  // namespace lawn
