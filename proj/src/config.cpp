#include "lawn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace lawn {

using nlohmann::json;

namespace {

constexpr double kMbit = 1e6;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be a map");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

Vec2 read_vec2(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("config: expected a 2-element array");
    return {j[0].get<double>(), j[1].get<double>()};
}

Vec3 read_vec3(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("config: expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    require_keys(j, "top level",
                 {"schema_version", "seed", "output_dir", "workspace", "obstacles", "users",
                  "fleet", "limits", "propulsion", "channel", "satisfaction", "reward",
                  "episode", "beamforming", "ppo", "strict_capacity"});

    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion)
        throw std::invalid_argument("config: unsupported schema_version");
    read(j, "seed", cfg.seed);
    read(j, "output_dir", cfg.output_dir);
    read(j, "strict_capacity", cfg.env.strict_capacity);

    if (j.contains("workspace")) {
        const auto& w = j.at("workspace");
        require_keys(w, "workspace", {"x_max", "y_max", "h_min", "h_max"});
        read(w, "x_max", cfg.env.workspace.x_max);
        read(w, "y_max", cfg.env.workspace.y_max);
        read(w, "h_min", cfg.env.workspace.h_min);
        read(w, "h_max", cfg.env.workspace.h_max);
    }

    if (j.contains("obstacles")) {
        const auto& o = j.at("obstacles");
        require_keys(o, "obstacles", {"cylinders", "rectangles"});
        if (o.contains("cylinders"))
            for (const auto& c : o.at("cylinders")) {
                require_keys(c, "obstacles.cylinders[]", {"center", "radius", "height"});
                CylindricalObstacle cyl;
                cyl.center = read_vec2(c.at("center"));
                cyl.radius = c.at("radius").get<double>();
                read(c, "height", cyl.height);
                cfg.env.cylinders.push_back(cyl);
            }
        if (o.contains("rectangles"))
            for (const auto& r : o.at("rectangles")) {
                require_keys(r, "obstacles.rectangles[]", {"center", "half_extents", "height"});
                RectangularObstacle rect;
                rect.center = read_vec2(r.at("center"));
                rect.half_extents = read_vec2(r.at("half_extents"));
                read(r, "height", rect.height);
                cfg.env.rectangles.push_back(rect);
            }
    }

    if (j.contains("users")) {
        const auto& u = j.at("users");
        require_keys(u, "users",
                     {"count", "positions", "explicit", "tiers", "resample_urgency_per_slot"});
        read(u, "count", cfg.env.users.count);
        if (u.contains("positions"))
            for (const auto& p : u.at("positions"))
                cfg.env.users.positions.push_back(read_vec2(p));
        if (u.contains("explicit"))
            for (const auto& e : u.at("explicit")) {
                require_keys(e, "users.explicit[]",
                             {"position", "urgency_per_mbps", "target_rate_mbps"});
                UserDevice dev;
                dev.position = read_vec2(e.at("position"));
                dev.urgency = e.at("urgency_per_mbps").get<double>() / kMbit;
                dev.target_rate = e.at("target_rate_mbps").get<double>() * kMbit;
                cfg.env.users.explicit_users.push_back(dev);
            }
        if (u.contains("tiers")) {
            cfg.env.users.tiers.clear();
            for (const auto& t : u.at("tiers")) {
                require_keys(t, "users.tiers[]",
                             {"urgency_per_mbps", "target_rate_mbps", "weight"});
                UrgencyTier tier;
                tier.urgency = t.at("urgency_per_mbps").get<double>() / kMbit;
                tier.target_rate = t.at("target_rate_mbps").get<double>() * kMbit;
                read(t, "weight", tier.weight);
                cfg.env.users.tiers.push_back(tier);
            }
        }
        read(u, "resample_urgency_per_slot", cfg.env.satisfaction.resample_urgency_per_slot);
    }

    if (j.contains("fleet")) {
        const auto& f = j.at("fleet");
        require_keys(f, "fleet",
                     {"count", "capacity", "power_budget_w", "array_rows", "array_cols",
                      "energy_init_j", "spawn_positions"});
        read(f, "count", cfg.env.fleet.count);
        read(f, "capacity", cfg.env.fleet.capacity);
        read(f, "power_budget_w", cfg.env.fleet.power_budget);
        read(f, "array_rows", cfg.env.fleet.array_rows);
        read(f, "array_cols", cfg.env.fleet.array_cols);
        read(f, "energy_init_j", cfg.env.fleet.energy_init);
        if (f.contains("spawn_positions"))
            for (const auto& p : f.at("spawn_positions"))
                cfg.env.spawn_positions.push_back(read_vec3(p));
    }

    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        require_keys(l, "limits", {"v_max_ms", "a_max_ms2", "d_min_m"});
        read(l, "v_max_ms", cfg.env.limits.v_max);
        read(l, "a_max_ms2", cfg.env.limits.a_max);
        read(l, "d_min_m", cfg.env.limits.d_min);
    }

    if (j.contains("propulsion")) {
        const auto& p = j.at("propulsion");
        require_keys(p, "propulsion",
                     {"blade_profile_power_w", "induced_hover_power_w", "tip_speed_ms",
                      "mean_rotor_speed_ms", "drag_coefficient", "air_density_kgm3",
                      "rotor_solidity", "rotor_disk_area_m2"});
        read(p, "blade_profile_power_w", cfg.env.propulsion.blade_profile_power);
        read(p, "induced_hover_power_w", cfg.env.propulsion.induced_hover_power);
        read(p, "tip_speed_ms", cfg.env.propulsion.tip_speed);
        read(p, "mean_rotor_speed_ms", cfg.env.propulsion.mean_rotor_speed);
        read(p, "drag_coefficient", cfg.env.propulsion.drag_coefficient);
        read(p, "air_density_kgm3", cfg.env.propulsion.air_density);
        read(p, "rotor_solidity", cfg.env.propulsion.rotor_solidity);
        read(p, "rotor_disk_area_m2", cfg.env.propulsion.rotor_disk_area);
    }

    if (j.contains("channel")) {
        const auto& c = j.at("channel");
        require_keys(c, "channel",
                     {"ref_gain_db", "path_loss_exponent", "rician_factor", "pure_los",
                      "carrier_hz", "spacing_ratio", "noise_dbm", "bandwidth_hz"});
        if (c.contains("ref_gain_db"))
            cfg.env.channel.ref_gain = db_to_linear(c.at("ref_gain_db").get<double>());
        read(c, "path_loss_exponent", cfg.env.channel.path_loss_exp);
        read(c, "rician_factor", cfg.env.channel.rician_factor);
        read(c, "pure_los", cfg.env.channel.pure_los);
        read(c, "carrier_hz", cfg.env.channel.carrier_hz);
        read(c, "spacing_ratio", cfg.env.channel.spacing_ratio);
        if (c.contains("noise_dbm"))
            cfg.env.channel.noise_power = dbm_to_watt(c.at("noise_dbm").get<double>());
        read(c, "bandwidth_hz", cfg.env.channel.bandwidth_hz);
    }

    if (j.contains("satisfaction")) {
        const auto& s = j.at("satisfaction");
        require_keys(s, "satisfaction", {"shaping_c"});
        read(s, "shaping_c", cfg.env.satisfaction.shaping_c);
    }

    if (j.contains("reward")) {
        const auto& r = j.at("reward");
        require_keys(r, "reward",
                     {"kappa_bounds", "kappa_cylinder", "kappa_rectangle", "kappa_separation",
                      "kappa_bonus_cylinder", "kappa_bonus_rectangle", "safe_margin_cylinder_m",
                      "safe_margin_rectangle_m"});
        read(r, "kappa_bounds", cfg.env.reward.bounds);
        read(r, "kappa_cylinder", cfg.env.reward.cylinder);
        read(r, "kappa_rectangle", cfg.env.reward.rectangle);
        read(r, "kappa_separation", cfg.env.reward.separation);
        read(r, "kappa_bonus_cylinder", cfg.env.reward.bonus_cylinder);
        read(r, "kappa_bonus_rectangle", cfg.env.reward.bonus_rectangle);
        read(r, "safe_margin_cylinder_m", cfg.env.reward.safe_margin_cylinder);
        if (r.contains("safe_margin_rectangle_m"))
            cfg.env.reward.safe_margin_rectangle = read_vec2(r.at("safe_margin_rectangle_m"));
    }

    if (j.contains("episode")) {
        const auto& e = j.at("episode");
        require_keys(e, "episode", {"horizon_slots", "slot_seconds"});
        read(e, "horizon_slots", cfg.env.horizon);
        read(e, "slot_seconds", cfg.env.slot_seconds);
    }

    if (j.contains("beamforming")) {
        const auto& b = j.at("beamforming");
        require_keys(b, "beamforming", {"epsilon_rel", "eq23_literal", "condition_limit"});
        read(b, "epsilon_rel", cfg.env.beam_eps_rel);
        read(b, "eq23_literal", cfg.env.eq23_literal);
        read(b, "condition_limit", cfg.env.condition_limit);
    }

    if (j.contains("ppo")) {
        const auto& p = j.at("ppo");
        require_keys(p, "ppo",
                     {"learning_rate", "gamma", "gae_lambda", "clip_epsilon", "epochs",
                      "minibatch_size", "entropy_coef", "grad_norm_cap", "hidden_sizes",
                      "buffer_capacity", "episodes_per_update", "max_episodes",
                      "log_std_init"});
        read(p, "learning_rate", cfg.ppo.learning_rate);
        read(p, "gamma", cfg.ppo.gamma);
        read(p, "gae_lambda", cfg.ppo.gae_lambda);
        read(p, "clip_epsilon", cfg.ppo.clip_epsilon);
        read(p, "epochs", cfg.ppo.epochs);
        read(p, "minibatch_size", cfg.ppo.minibatch_size);
        read(p, "entropy_coef", cfg.ppo.entropy_coef);
        read(p, "grad_norm_cap", cfg.ppo.grad_norm_cap);
        if (p.contains("hidden_sizes"))
            cfg.ppo.hidden = p.at("hidden_sizes").get<std::vector<int>>();
        read(p, "buffer_capacity", cfg.ppo.buffer_capacity);
        read(p, "episodes_per_update", cfg.ppo.episodes_per_update);
        read(p, "max_episodes", cfg.ppo.max_episodes);
        read(p, "log_std_init", cfg.ppo.log_std_init);
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["strict_capacity"] = env.strict_capacity;
    j["workspace"] = {{"x_max", env.workspace.x_max},
                      {"y_max", env.workspace.y_max},
                      {"h_min", env.workspace.h_min},
                      {"h_max", env.workspace.h_max}};
    json cyls = json::array(), rects = json::array();
    for (const auto& c : env.cylinders)
        cyls.push_back({{"center", {c.center.x, c.center.y}},
                        {"radius", c.radius},
                        {"height", c.height}});
    for (const auto& r : env.rectangles)
        rects.push_back({{"center", {r.center.x, r.center.y}},
                         {"half_extents", {r.half_extents.x, r.half_extents.y}},
                         {"height", r.height}});
    j["obstacles"] = {{"cylinders", cyls}, {"rectangles", rects}};

    json users;
    users["count"] = env.users.count;
    if (!env.users.positions.empty()) {
        json pos = json::array();
        for (const auto& p : env.users.positions) pos.push_back({p.x, p.y});
        users["positions"] = pos;
    }
    if (!env.users.explicit_users.empty()) {
        json ex = json::array();
        for (const auto& u : env.users.explicit_users)
            ex.push_back({{"position", {u.position.x, u.position.y}},
                          {"urgency_per_mbps", u.urgency * kMbit},
                          {"target_rate_mbps", u.target_rate / kMbit}});
        users["explicit"] = ex;
    }
    json tiers = json::array();
    for (const auto& t : env.users.tiers)
        tiers.push_back({{"urgency_per_mbps", t.urgency * kMbit},
                         {"target_rate_mbps", t.target_rate / kMbit},
                         {"weight", t.weight}});
    users["tiers"] = tiers;
    users["resample_urgency_per_slot"] = env.satisfaction.resample_urgency_per_slot;
    j["users"] = users;

    json fleet = {{"count", env.fleet.count},
                  {"capacity", env.fleet.capacity},
                  {"power_budget_w", env.fleet.power_budget},
                  {"array_rows", env.fleet.array_rows},
                  {"array_cols", env.fleet.array_cols},
                  {"energy_init_j", env.fleet.energy_init}};
    if (!env.spawn_positions.empty()) {
        json sp = json::array();
        for (const auto& p : env.spawn_positions) sp.push_back({p.x, p.y, p.z});
        fleet["spawn_positions"] = sp;
    }
    j["fleet"] = fleet;

    j["limits"] = {{"v_max_ms", env.limits.v_max},
                   {"a_max_ms2", env.limits.a_max},
                   {"d_min_m", env.limits.d_min}};
    j["propulsion"] = {{"blade_profile_power_w", env.propulsion.blade_profile_power},
                       {"induced_hover_power_w", env.propulsion.induced_hover_power},
                       {"tip_speed_ms", env.propulsion.tip_speed},
                       {"mean_rotor_speed_ms", env.propulsion.mean_rotor_speed},
                       {"drag_coefficient", env.propulsion.drag_coefficient},
                       {"air_density_kgm3", env.propulsion.air_density},
                       {"rotor_solidity", env.propulsion.rotor_solidity},
                       {"rotor_disk_area_m2", env.propulsion.rotor_disk_area}};
    j["channel"] = {{"ref_gain_db", linear_to_db(env.channel.ref_gain)},
                    {"path_loss_exponent", env.channel.path_loss_exp},
                    {"rician_factor", env.channel.rician_factor},
                    {"pure_los", env.channel.pure_los},
                    {"carrier_hz", env.channel.carrier_hz},
                    {"spacing_ratio", env.channel.spacing_ratio},
                    {"noise_dbm", watt_to_dbm(env.channel.noise_power)},
                    {"bandwidth_hz", env.channel.bandwidth_hz}};
    j["satisfaction"] = {{"shaping_c", env.satisfaction.shaping_c}};
    j["reward"] = {{"kappa_bounds", env.reward.bounds},
                   {"kappa_cylinder", env.reward.cylinder},
                   {"kappa_rectangle", env.reward.rectangle},
                   {"kappa_separation", env.reward.separation},
                   {"kappa_bonus_cylinder", env.reward.bonus_cylinder},
                   {"kappa_bonus_rectangle", env.reward.bonus_rectangle},
                   {"safe_margin_cylinder_m", env.reward.safe_margin_cylinder},
                   {"safe_margin_rectangle_m",
                    {env.reward.safe_margin_rectangle.x, env.reward.safe_margin_rectangle.y}}};
    j["episode"] = {{"horizon_slots", env.horizon}, {"slot_seconds", env.slot_seconds}};
    j["beamforming"] = {{"epsilon_rel", env.beam_eps_rel},
                        {"eq23_literal", env.eq23_literal},
                        {"condition_limit", env.condition_limit}};
    j["ppo"] = {{"learning_rate", ppo.learning_rate},
                {"gamma", ppo.gamma},
                {"gae_lambda", ppo.gae_lambda},
                {"clip_epsilon", ppo.clip_epsilon},
                {"epochs", ppo.epochs},
                {"minibatch_size", ppo.minibatch_size},
                {"entropy_coef", ppo.entropy_coef},
                {"grad_norm_cap", ppo.grad_norm_cap},
                {"hidden_sizes", ppo.hidden},
                {"buffer_capacity", ppo.buffer_capacity},
                {"episodes_per_update", ppo.episodes_per_update},
                {"max_episodes", ppo.max_episodes},
                {"log_std_init", ppo.log_std_init}};
    return j;
}

std::uint64_t ExperimentConfig::hash() const {
    std::string s = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void ExperimentConfig::validate() const {
    env.validate();
    if (!(ppo.learning_rate > 0.0) || !(ppo.clip_epsilon > 0.0))
        throw std::invalid_argument("ppo: learning rate and clip epsilon must be positive");
    if (ppo.gamma < 0.0 || ppo.gamma > 1.0 || ppo.gae_lambda < 0.0 || ppo.gae_lambda > 1.0)
        throw std::invalid_argument("ppo: gamma and gae_lambda must lie in [0, 1]");
    if (ppo.epochs < 1 || ppo.minibatch_size < 1 || ppo.max_episodes < 0)
        throw std::invalid_argument("ppo: bad epoch/minibatch/episode counts");
    if (ppo.buffer_capacity < env.horizon)
        throw std::invalid_argument("ppo: buffer capacity below one episode");
    if (ppo.hidden.empty()) throw std::invalid_argument("ppo: need at least one hidden layer");
}

}  // namespace lawn
