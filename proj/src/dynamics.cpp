#include "lawn/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace lawn {

void PropulsionConstants::validate() const {
    const double vals[] = {blade_profile_power, induced_hover_power, tip_speed,
                           mean_rotor_speed,    drag_coefficient,    air_density,
                           rotor_solidity,      rotor_disk_area};
    for (double v : vals)
        if (!(v > 0.0)) throw std::invalid_argument("propulsion constants must be positive");
}

namespace {

Vec3 clamp_norm(Vec3 v, double limit) {
    double n = norm(v);
    if (n > limit && n > 0.0) return (limit / n) * v;
    return v;
}

bool finite(Vec3 v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

std::pair<Vec3, Vec3> step_kinematics(Vec3 q, Vec3 v, Vec3 a_cmd, double dt,
                                      const MotionLimits& lim) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_kinematics: dt must be positive");
    if (!finite(q) || !finite(v) || !finite(a_cmd))
        throw std::invalid_argument("step_kinematics: non-finite input");
    Vec3 a = clamp_norm(a_cmd, lim.a_max);
    Vec3 q_next = q + dt * v + (0.5 * dt * dt) * a;
    Vec3 v_next = clamp_norm(v + dt * a, lim.v_max);
    return {q_next, v_next};
}

double propulsion_power(Vec3 v, const PropulsionConstants& c) {
    double s2 = dot(v, v);
    double s = std::sqrt(s2);
    double parasite = 0.5 * c.drag_coefficient * c.air_density * c.rotor_solidity *
                      c.rotor_disk_area * s2 * s;
    double blade = c.blade_profile_power * (1.0 + 3.0 * s2 / (c.tip_speed * c.tip_speed));
    double v0_2 = c.mean_rotor_speed * c.mean_rotor_speed;
    double radicand = 1.0 + s2 * s2 / (4.0 * v0_2 * v0_2) - s2 / (2.0 * v0_2);
    if (radicand < 0.0) radicand = 0.0;  // guards rounding near the minimum
    double induced = c.induced_hover_power * std::sqrt(radicand);
    return parasite + blade + induced;
}

UavState consume_and_update(const UavState& s, double p_fly, double dt) {
    if (!s.alive) throw std::logic_error("consume_and_update: UAV already failed");
    UavState next = s;
    next.residual_energy = s.residual_energy - p_fly * dt;
    next.alive = next.residual_energy > 0.0;
    return next;
}

std::vector<std::pair<int, int>> pairwise_separation_violations(
    const std::vector<UavState>& states, double d_min) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(states.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (norm(states[i].position - states[j].position) < d_min) out.emplace_back(i, j);
    return out;
}

}  // namespace lawn
