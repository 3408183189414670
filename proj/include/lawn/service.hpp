#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lawn/dynamics.hpp"

namespace lawn {

// Binary UAV-user assignment for one slot. alpha[n][k] = 1 means UAV n serves
// user k. Column sums are 0 or 1; row sums never exceed the UAV capacity;
// dead UAVs hold no associations.
struct AssociationMatrix {
    std::vector<std::vector<std::uint8_t>> alpha;

    AssociationMatrix() = default;
    AssociationMatrix(int n_uavs, int n_users)
        : alpha(n_uavs, std::vector<std::uint8_t>(n_users, 0)) {}

    int n_uavs() const { return static_cast<int>(alpha.size()); }
    int n_users() const { return alpha.empty() ? 0 : static_cast<int>(alpha[0].size()); }

    std::optional<int> serving_uav(int user) const {
        for (int n = 0; n < n_uavs(); ++n)
            if (alpha[n][user]) return n;
        return std::nullopt;
    }

    int load(int uav) const {
        int s = 0;
        for (auto v : alpha[uav]) s += v;
        return s;
    }
};

// Sigmoid rate-to-satisfaction map. Steepness urgency (1/(bit/s)) against a
// target rate; shaping constant c keeps f(target) pinned near one.
double satisfaction_f(double rate, double target_rate, double urgency, double c);

inline double satisfaction_s(double f, bool associated) { return associated ? f : 0.0; }

// Greedy assignment from arbitrary per-user preference scores. Users are
// processed in descending best-feasible-score order; ties break toward the
// lowest UAV index, then the lowest user index. Users that cannot be placed
// (no live UAV with spare capacity) are left unserved.
AssociationMatrix repair_association(const std::vector<std::vector<double>>& scores,
                                     const std::vector<UavState>& states);

// Drops every association held by a dead UAV and reassigns orphaned users to
// the nearest live UAV with spare capacity. Users already on a live UAV are
// never moved.
AssociationMatrix handle_failures(const AssociationMatrix& prev,
                                  const std::vector<UavState>& states,
                                  const std::vector<Vec2>& user_positions);

}  // namespace lawn
