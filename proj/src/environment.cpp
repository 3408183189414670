#include "lawn/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lawn {

namespace {

constexpr std::uint64_t kStreamUavSpawn = 0x5141;
constexpr std::uint64_t kStreamUserPlace = 0x5142;
constexpr std::uint64_t kStreamTiers = 0x5143;
constexpr std::uint64_t kStreamChannel = 0x5144;

}  // namespace

void EnvConfig::validate() const {
    Scenario s;
    s.workspace = workspace;
    s.cylinders = cylinders;
    s.rectangles = rectangles;
    s.users = users.explicit_users;
    s.validate();

    if (fleet.count < 1) throw std::invalid_argument("fleet: need at least one UAV");
    if (fleet.capacity < 1) throw std::invalid_argument("fleet: capacity must be >= 1");
    if (fleet.array_rows < 1 || fleet.array_cols < 1)
        throw std::invalid_argument("fleet: array dims must be >= 1");
    if (fleet.capacity > fleet.antennas())
        throw std::invalid_argument("fleet: capacity exceeds antenna count (ZF infeasible)");
    if (!(fleet.power_budget > 0.0) || !(fleet.energy_init > 0.0))
        throw std::invalid_argument("fleet: power budget and energy must be positive");
    if (strict_capacity && fleet.count * fleet.capacity < n_users())
        throw std::invalid_argument("fleet: aggregate capacity below user count");

    if (!(limits.v_max > 0.0) || !(limits.a_max > 0.0) || !(limits.d_min > 0.0))
        throw std::invalid_argument("limits must be positive");
    propulsion.validate();
    channel.validate();
    if (!(satisfaction.shaping_c > 7.0))
        throw std::invalid_argument("satisfaction: shaping constant must exceed 7");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (!(slot_seconds > 0.0)) throw std::invalid_argument("slot length must be positive");
    if (!(beam_eps_rel > 0.0)) throw std::invalid_argument("beam eps must be positive");

    if (!spawn_positions.empty() &&
        static_cast<int>(spawn_positions.size()) != fleet.count)
        throw std::invalid_argument("spawn_positions: need one entry per UAV");

    if (users.explicit_users.empty() && users.positions.empty() && users.count < 1)
        throw std::invalid_argument("users: need a count, positions, or explicit list");
    if (users.tiers.empty() && users.explicit_users.empty())
        throw std::invalid_argument("users: tier table required");
    for (const auto& t : users.tiers)
        if (!(t.urgency > 0.0) || !(t.target_rate > 0.0) || !(t.weight > 0.0))
            throw std::invalid_argument("users: tier entries must be positive");
    for (const auto& p : users.positions)
        if (p.x < 0.0 || p.x > workspace.x_max || p.y < 0.0 || p.y > workspace.y_max)
            throw std::invalid_argument("users: fixed position outside footprint");
}

RewardBreakdown compute_reward(const std::vector<UavState>& states,
                               const AssociationMatrix& assoc, double s_total,
                               const Workspace& workspace,
                               const std::vector<CylindricalObstacle>& cylinders,
                               const std::vector<RectangularObstacle>& rectangles,
                               const std::vector<UserDevice>& users,
                               const RewardWeights& w, double d_min) {
    RewardBreakdown r;
    r.s_total = s_total;

    const int n = static_cast<int>(states.size());
    for (int i = 0; i < n; ++i) {
        if (!states[i].alive) continue;
        const Vec3 q = states[i].position;
        const Vec2 p = horizontal(q);

        double viol = workspace_violation(q, workspace);
        r.penalty_bounds += w.bounds * viol * viol;

        for (const auto& o : cylinders) {
            if (q.z > o.height) continue;  // flying over is permitted
            if (!contains_cyl(p, o)) continue;
            double depth = clearance_cyl(p, o);
            r.penalty_cylinder += w.cylinder * depth * depth;
        }
        for (const auto& o : rectangles) {
            if (q.z > o.height) continue;
            if (!contains_rect(p, o)) continue;
            double depth = intrusion_rect(p, o);
            r.penalty_rectangle += w.rectangle * depth * depth;
        }
    }

    for (int i = 0; i < n; ++i) {
        if (!states[i].alive) continue;
        for (int j = i + 1; j < n; ++j) {
            if (!states[j].alive) continue;
            double dist = norm(states[i].position - states[j].position);
            if (dist < d_min) r.penalty_separation += w.separation * std::exp(-dist / d_min);
        }
    }

    // approach bonus: serving a user that sits inside an obstacle, while
    // standing in the band within the safety margin of that obstacle
    const double rect_margin = std::min(w.safe_margin_rectangle.x, w.safe_margin_rectangle.y);
    for (int nn = 0; nn < n; ++nn) {
        if (!states[nn].alive) continue;
        const Vec3 q = states[nn].position;
        const Vec2 p = horizontal(q);
        for (int k = 0; k < assoc.n_users(); ++k) {
            if (!assoc.alpha[nn][k]) continue;
            const auto& host = users[k].hosting_obstacle;
            if (!host) continue;
            if (host->kind == ObstacleKind::Cylinder) {
                const auto& o = cylinders[host->index];
                if (q.z > o.height) continue;
                double delta = norm(p - o.center) - o.radius;
                if (delta > 0.0 && delta <= w.safe_margin_cylinder)
                    r.bonus += std::exp(w.bonus_cylinder * (w.safe_margin_cylinder - delta));
            } else {
                const auto& o = rectangles[host->index];
                if (q.z > o.height) continue;
                double delta = rect_exterior_distance(p, o);
                if (delta > 0.0 && delta <= rect_margin)
                    r.bonus += std::exp(w.bonus_rectangle * (rect_margin - delta));
            }
        }
    }
    return r;
}

Environment::Environment(EnvConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), seed_(seed) {
    cfg_.validate();
    n_uavs_ = cfg_.fleet.count;
    n_users_ = cfg_.n_users();

    urgency_norm_ = 0.0;
    rate_norm_ = 0.0;
    for (const auto& t : cfg_.users.tiers) {
        urgency_norm_ = std::max(urgency_norm_, t.urgency);
        rate_norm_ = std::max(rate_norm_, t.target_rate);
    }
    for (const auto& u : cfg_.users.explicit_users) {
        urgency_norm_ = std::max(urgency_norm_, u.urgency);
        rate_norm_ = std::max(rate_norm_, u.target_rate);
    }
    if (urgency_norm_ <= 0.0) urgency_norm_ = 1.0;
    if (rate_norm_ <= 0.0) rate_norm_ = 1.0;
}

void Environment::place_users(Rng& rng) {
    episode_users_.clear();
    episode_users_.reserve(n_users_);
    if (!cfg_.users.explicit_users.empty()) {
        episode_users_ = cfg_.users.explicit_users;
    } else if (!cfg_.users.positions.empty()) {
        for (const auto& p : cfg_.users.positions) episode_users_.push_back({p, 1e-6, 1e6, {}});
    } else {
        for (int k = 0; k < n_users_; ++k) {
            Vec2 p{rng.uniform(0.0, cfg_.workspace.x_max), rng.uniform(0.0, cfg_.workspace.y_max)};
            episode_users_.push_back({p, 1e-6, 1e6, {}});
        }
    }
}

void Environment::sample_tiers(Rng& rng) {
    if (!cfg_.users.explicit_users.empty()) return;  // fully pinned
    double total_w = 0.0;
    for (const auto& t : cfg_.users.tiers) total_w += t.weight;
    for (auto& u : episode_users_) {
        double x = rng.uniform(0.0, total_w);
        const UrgencyTier* pick = &cfg_.users.tiers.back();
        for (const auto& t : cfg_.users.tiers) {
            if (x < t.weight) {
                pick = &t;
                break;
            }
            x -= t.weight;
        }
        u.urgency = pick->urgency;
        u.target_rate = pick->target_rate;
    }
}

std::vector<double> Environment::reset() { return reset(episode_ + 1); }

std::vector<double> Environment::reset(int episode) {
    episode_ = episode;
    slot_ = 0;
    done_ = false;

    Rng user_rng = derive_rng(seed_, static_cast<std::uint64_t>(episode), kStreamUserPlace);
    place_users(user_rng);
    Rng tier_rng = derive_rng(seed_, static_cast<std::uint64_t>(episode), kStreamTiers);
    sample_tiers(tier_rng);

    Scenario scn;
    scn.workspace = cfg_.workspace;
    scn.cylinders = cfg_.cylinders;
    scn.rectangles = cfg_.rectangles;
    for (auto& u : episode_users_) u.hosting_obstacle = scn.hosting_obstacle(u.position);

    Rng spawn_rng = derive_rng(seed_, static_cast<std::uint64_t>(episode), kStreamUavSpawn);
    uavs_.assign(n_uavs_, UavState{});
    for (int n = 0; n < n_uavs_; ++n) {
        UavState& s = uavs_[n];
        s.capacity = cfg_.fleet.capacity;
        s.power_budget = cfg_.fleet.power_budget;
        s.array_rows = cfg_.fleet.array_rows;
        s.array_cols = cfg_.fleet.array_cols;
        s.residual_energy = cfg_.fleet.energy_init;
        s.alive = true;
        s.velocity = {};
        if (!cfg_.spawn_positions.empty()) {
            s.position = cfg_.spawn_positions[n];
            continue;
        }
        for (int attempt = 0; attempt < 100; ++attempt) {
            Vec3 q{spawn_rng.uniform(0.0, cfg_.workspace.x_max),
                   spawn_rng.uniform(0.0, cfg_.workspace.y_max),
                   spawn_rng.uniform(cfg_.workspace.h_min, cfg_.workspace.h_max)};
            bool clear = true;
            for (const auto& o : cfg_.cylinders)
                if (q.z <= o.height && contains_cyl(horizontal(q), o)) clear = false;
            for (const auto& o : cfg_.rectangles)
                if (q.z <= o.height && contains_rect(horizontal(q), o)) clear = false;
            for (int m = 0; m < n; ++m)
                if (norm(uavs_[m].position - q) < cfg_.limits.d_min) clear = false;
            s.position = q;
            if (clear) break;
        }
    }

    assoc_ = AssociationMatrix(n_uavs_, n_users_);
    return observe();
}

std::vector<double> Environment::observe() const {
    std::vector<double> obs;
    obs.reserve(obs_dim());
    const auto& w = cfg_.workspace;
    for (const auto& s : uavs_) {
        obs.push_back(s.position.x / w.x_max);
        obs.push_back(s.position.y / w.y_max);
        obs.push_back((s.position.z - w.h_min) / (w.h_max - w.h_min));
        obs.push_back(s.velocity.x / cfg_.limits.v_max);
        obs.push_back(s.velocity.y / cfg_.limits.v_max);
        obs.push_back(s.velocity.z / cfg_.limits.v_max);
        obs.push_back(s.residual_energy / cfg_.fleet.energy_init);
        obs.push_back(s.alive ? 1.0 : 0.0);
    }
    for (const auto& u : episode_users_) {
        obs.push_back(u.position.x / w.x_max);
        obs.push_back(u.position.y / w.y_max);
        obs.push_back(u.urgency / urgency_norm_);
        obs.push_back(u.target_rate / rate_norm_);
        obs.push_back(u.hosting_obstacle ? 1.0 : 0.0);
    }
    return obs;
}

std::pair<std::vector<Vec3>, AssociationMatrix> Environment::decode_action(
    const Action& action) const {
    if (static_cast<int>(action.accel.size()) != 3 * n_uavs_)
        throw std::invalid_argument("decode_action: acceleration block size mismatch");
    if (static_cast<int>(action.assoc_choice.size()) != n_users_)
        throw std::invalid_argument("decode_action: association block size mismatch");

    std::vector<Vec3> accels(n_uavs_);
    for (int n = 0; n < n_uavs_; ++n) {
        Vec3 a{std::clamp(action.accel[3 * n + 0], -1.0, 1.0) * cfg_.limits.a_max,
               std::clamp(action.accel[3 * n + 1], -1.0, 1.0) * cfg_.limits.a_max,
               std::clamp(action.accel[3 * n + 2], -1.0, 1.0) * cfg_.limits.a_max};
        double nn = norm(a);
        if (nn > cfg_.limits.a_max) a = (cfg_.limits.a_max / nn) * a;
        accels[n] = a;
    }

    std::vector<std::vector<double>> scores(n_uavs_, std::vector<double>(n_users_, 0.0));
    for (int k = 0; k < n_users_; ++k) {
        int choice = action.assoc_choice[k];
        if (choice < 0 || choice >= n_uavs_)
            throw std::invalid_argument("decode_action: association choice out of range");
        scores[choice][k] = 1.0;
    }
    return {accels, repair_association(scores, uavs_)};
}

void Environment::set_residual_energy(int uav, double joules) {
    uavs_.at(uav).residual_energy = joules;
    uavs_.at(uav).alive = joules > 0.0;
}

StepResult Environment::step(const Action& action) {
    if (done_) throw std::logic_error("step: episode already finished");

    if (cfg_.satisfaction.resample_urgency_per_slot) {
        Rng tier_rng = derive_rng(seed_, static_cast<std::uint64_t>(episode_), kStreamTiers,
                                  static_cast<std::uint64_t>(slot_) + 1);
        sample_tiers(tier_rng);
    }

    auto [accels, desired_assoc] = decode_action(action);

    // kinematics then energy; dead UAVs stay frozen
    int failures = 0;
    for (int n = 0; n < n_uavs_; ++n) {
        UavState& s = uavs_[n];
        if (!s.alive) continue;
        auto [q2, v2] =
            step_kinematics(s.position, s.velocity, accels[n], cfg_.slot_seconds, cfg_.limits);
        s.position = q2;
        s.velocity = v2;
        double p_fly = propulsion_power(s.velocity, cfg_.propulsion);
        UavState next = consume_and_update(s, p_fly, cfg_.slot_seconds);
        if (!next.alive) {
            ++failures;
            next.velocity = {};
        }
        s = next;
    }

    std::vector<Vec2> user_pos(n_users_);
    for (int k = 0; k < n_users_; ++k) user_pos[k] = episode_users_[k].position;
    if (cfg_.distance_association) {
        std::vector<std::vector<double>> scores(n_uavs_, std::vector<double>(n_users_, 0.0));
        for (int n = 0; n < n_uavs_; ++n)
            for (int k = 0; k < n_users_; ++k) {
                Vec3 up{user_pos[k].x, user_pos[k].y, 0.0};
                scores[n][k] = -norm(uavs_[n].position - up);
            }
        desired_assoc = repair_association(scores, uavs_);
    }
    assoc_ = handle_failures(desired_assoc, uavs_, user_pos);

    // channel block: per-link streams keyed by (seed, episode, slot, link)
    std::vector<std::vector<ChannelRealization>> channels(
        n_uavs_, std::vector<ChannelRealization>(n_users_));
    const std::uint64_t slot_tag =
        (static_cast<std::uint64_t>(kStreamChannel) << 32) | static_cast<std::uint64_t>(slot_);
#pragma omp parallel for schedule(static) if (n_uavs_ * n_users_ > 8)
    for (int link = 0; link < n_uavs_ * n_users_; ++link) {
        int n = link / n_users_;
        int k = link % n_users_;
        if (!uavs_[n].alive) continue;
        Rng rng = derive_rng(seed_, static_cast<std::uint64_t>(episode_), slot_tag,
                             static_cast<std::uint64_t>(link));
        Vec3 up{episode_users_[k].position.x, episode_users_[k].position.y, 0.0};
        channels[n][k] = sample_channel(uavs_[n].position, up, cfg_.fleet.array_rows,
                                        cfg_.fleet.array_cols, cfg_.channel, rng);
    }

    // beamforming block: per-UAV ZF water-filling (or the equal baseline)
    std::vector<std::vector<cvec>> beams(n_uavs_, std::vector<cvec>(n_users_));
#pragma omp parallel for schedule(dynamic) if (n_uavs_ > 1)
    for (int n = 0; n < n_uavs_; ++n) {
        if (!uavs_[n].alive) continue;
        std::vector<int> served;
        for (int k = 0; k < n_users_; ++k)
            if (assoc_.alpha[n][k]) served.push_back(k);
        if (served.empty()) continue;
        std::vector<cvec> rows;
        rows.reserve(served.size());
        for (int k : served) rows.push_back(channels[n][k].h);
        BeamformingSolution sol =
            cfg_.equal_beam
                ? equal_beamforming(static_cast<int>(served.size()), cfg_.fleet.antennas(),
                                    cfg_.fleet.power_budget)
                : solve_zf_waterfill(rows, cfg_.channel.noise_power, cfg_.fleet.power_budget,
                                     cfg_.beam_eps_rel, cfg_.eq23_literal, cfg_.condition_limit);
        for (std::size_t i = 0; i < served.size(); ++i)
            beams[n][served[i]] = std::move(sol.beams[i]);
    }

    SlotDiagnostics diag;
    diag.slot = slot_;
    diag.rates.assign(n_users_, 0.0);
    diag.sat.assign(n_users_, 0.0);
    diag.serving.assign(n_users_, -1);
    diag.failures_this_slot = failures;

    double s_total = 0.0;
    for (int k = 0; k < n_users_; ++k) {
        auto serving = assoc_.serving_uav(k);
        if (!serving) continue;
        diag.serving[k] = *serving;
        auto [sinr, rate] = sinr_and_rate(k, assoc_.alpha, beams, channels,
                                          cfg_.channel.noise_power, cfg_.channel.bandwidth_hz);
        (void)sinr;
        diag.rates[k] = rate;
        double f = satisfaction_f(rate, episode_users_[k].target_rate, episode_users_[k].urgency,
                                  cfg_.satisfaction.shaping_c);
        diag.sat[k] = satisfaction_s(f, true);
        s_total += diag.sat[k];
    }

    diag.reward = compute_reward(uavs_, assoc_, s_total, cfg_.workspace, cfg_.cylinders,
                                 cfg_.rectangles, episode_users_, cfg_.reward, cfg_.limits.d_min);

    for (const auto& s : uavs_) {
        if (!s.alive) continue;
        if (workspace_violation(s.position, cfg_.workspace) > 0.0) ++diag.boundary_violations;
        const Vec2 p = horizontal(s.position);
        for (const auto& o : cfg_.cylinders)
            if (s.position.z <= o.height && contains_cyl(p, o)) ++diag.obstacle_violations;
        for (const auto& o : cfg_.rectangles)
            if (s.position.z <= o.height && contains_rect(p, o)) ++diag.obstacle_violations;
    }
    std::vector<UavState> alive_states;
    for (const auto& s : uavs_)
        if (s.alive) alive_states.push_back(s);
    diag.separation_violations =
        static_cast<int>(pairwise_separation_violations(alive_states, cfg_.limits.d_min).size());

    ++slot_;
    bool all_dead = std::none_of(uavs_.begin(), uavs_.end(),
                                 [](const UavState& s) { return s.alive; });
    done_ = slot_ >= cfg_.horizon || all_dead;

    StepResult out;
    out.observation = observe();
    out.reward = diag.reward.total();
    out.done = done_;
    out.diag = std::move(diag);
    return out;
}

}  // namespace lawn
