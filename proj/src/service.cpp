#include "lawn/service.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lawn {

double satisfaction_f(double rate, double target_rate, double urgency, double c) {
    if (!(urgency > 0.0)) throw std::invalid_argument("satisfaction_f: urgency must be positive");
    if (!(c > 7.0)) throw std::invalid_argument("satisfaction_f: shaping constant must exceed 7");
    double x = urgency * (rate - target_rate) + c;
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

AssociationMatrix repair_association(const std::vector<std::vector<double>>& scores,
                                     const std::vector<UavState>& states) {
    const int n_uavs = static_cast<int>(states.size());
    const int n_users = n_uavs > 0 ? static_cast<int>(scores[0].size()) : 0;
    if (static_cast<int>(scores.size()) != n_uavs)
        throw std::invalid_argument("repair_association: score rows != UAV count");
    for (const auto& row : scores)
        for (double s : row)
            if (!std::isfinite(s)) throw std::invalid_argument("repair_association: non-finite score");

    AssociationMatrix out(n_uavs, n_users);
    std::vector<int> spare(n_uavs);
    for (int n = 0; n < n_uavs; ++n) spare[n] = states[n].alive ? states[n].capacity : 0;
    std::vector<bool> placed(n_users, false);

    for (int round = 0; round < n_users; ++round) {
        int best_user = -1, best_uav = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        // n-major scan with strict > resolves ties to the lowest UAV index,
        // then the lowest user index
        for (int n = 0; n < n_uavs; ++n) {
            if (spare[n] <= 0) continue;
            for (int k = 0; k < n_users; ++k) {
                if (placed[k]) continue;
                if (scores[n][k] > best_score) {
                    best_score = scores[n][k];
                    best_uav = n;
                    best_user = k;
                }
            }
        }
        if (best_user < 0) break;  // capacity exhausted
        out.alpha[best_uav][best_user] = 1;
        placed[best_user] = true;
        --spare[best_uav];
    }
    return out;
}

AssociationMatrix handle_failures(const AssociationMatrix& prev,
                                  const std::vector<UavState>& states,
                                  const std::vector<Vec2>& user_positions) {
    const int n_uavs = prev.n_uavs();
    const int n_users = prev.n_users();
    if (static_cast<int>(states.size()) != n_uavs)
        throw std::invalid_argument("handle_failures: state count mismatch");

    AssociationMatrix out(n_uavs, n_users);
    std::vector<int> spare(n_uavs);
    for (int n = 0; n < n_uavs; ++n) spare[n] = states[n].alive ? states[n].capacity : 0;

    // keep every association that still points at a live UAV
    for (int n = 0; n < n_uavs; ++n) {
        if (!states[n].alive) continue;
        for (int k = 0; k < n_users; ++k) {
            if (prev.alpha[n][k]) {
                out.alpha[n][k] = 1;
                --spare[n];
            }
        }
    }

    for (int k = 0; k < n_users; ++k) {
        if (out.serving_uav(k)) continue;
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int n = 0; n < n_uavs; ++n) {
            if (!states[n].alive || spare[n] <= 0) continue;
            Vec2 d = horizontal(states[n].position) - user_positions[k];
            double dz = states[n].position.z;
            double dist = std::sqrt(d.x * d.x + d.y * d.y + dz * dz);
            if (dist < best_dist) {
                best_dist = dist;
                best = n;
            }
        }
        if (best >= 0) {
            out.alpha[best][k] = 1;
            --spare[best];
        }
    }
    return out;
}

}  // namespace lawn
