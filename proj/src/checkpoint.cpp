#include "lawn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lawn {

namespace {

constexpr char kMagic[8] = {'L', 'A', 'W', 'N', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

void put_tensors(std::ofstream& f, const std::vector<ParamView>& params) {
    put<std::uint32_t>(f, static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        put<std::uint64_t>(f, p.size);
        f.write(reinterpret_cast<const char*>(p.value), p.size * sizeof(double));
    }
}

void get_tensors(std::ifstream& f, const std::vector<ParamView>& params) {
    auto count = get<std::uint32_t>(f);
    if (count != params.size()) throw std::runtime_error("checkpoint: tensor count mismatch");
    for (const auto& p : params) {
        auto size = get<std::uint64_t>(f);
        if (size != p.size) throw std::runtime_error("checkpoint: tensor size mismatch");
        f.read(reinterpret_cast<char*>(p.value), p.size * sizeof(double));
        if (!f) throw std::runtime_error("checkpoint: truncated tensor");
    }
}

void put_adam(std::ofstream& f, Adam& opt) {
    put<std::int32_t>(f, opt.step_count());
    for (auto* moments : {&opt.first_moments(), &opt.second_moments()}) {
        put<std::uint32_t>(f, static_cast<std::uint32_t>(moments->size()));
        for (const auto& m : *moments) {
            put<std::uint64_t>(f, m.size());
            f.write(reinterpret_cast<const char*>(m.data()), m.size() * sizeof(double));
        }
    }
}

void get_adam(std::ifstream& f, Adam& opt) {
    opt.set_step_count(get<std::int32_t>(f));
    for (auto* moments : {&opt.first_moments(), &opt.second_moments()}) {
        auto count = get<std::uint32_t>(f);
        if (count != moments->size()) throw std::runtime_error("checkpoint: moment count mismatch");
        for (auto& m : *moments) {
            auto size = get<std::uint64_t>(f);
            if (size != m.size()) throw std::runtime_error("checkpoint: moment size mismatch");
            f.read(reinterpret_cast<char*>(m.data()), m.size() * sizeof(double));
            if (!f) throw std::runtime_error("checkpoint: truncated moments");
        }
    }
}

}  // namespace

void save_checkpoint(const std::string& path, HybridPolicy& policy, Adam& actor_opt,
                     Adam& critic_opt, const Rng::State& action_rng,
                     std::uint64_t config_hash, int episodes_trained) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open for write: " + path);

    f.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(f, kCheckpointVersion);
    put<std::uint64_t>(f, config_hash);
    put<std::int32_t>(f, episodes_trained);

    put<std::int32_t>(f, policy.obs_dim());
    put<std::int32_t>(f, policy.n_uavs());
    put<std::int32_t>(f, policy.n_users());
    put<std::uint32_t>(f, static_cast<std::uint32_t>(policy.hidden().size()));
    for (int h : policy.hidden()) put<std::int32_t>(f, h);

    put_tensors(f, policy.actor_params());
    put_tensors(f, policy.critic_params());
    put_adam(f, actor_opt);
    put_adam(f, critic_opt);

    put<std::uint64_t>(f, action_rng.counter);
    put<double>(f, action_rng.spare);
    put<std::uint8_t>(f, action_rng.have_spare ? 1 : 0);

    if (!f) throw std::runtime_error("checkpoint: write failure: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint: cannot open: " + path);

    char magic[8];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("checkpoint: bad magic: " + path);
    auto version = get<std::uint32_t>(f);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version");

    auto config_hash = get<std::uint64_t>(f);
    auto episodes = get<std::int32_t>(f);
    auto obs_dim = get<std::int32_t>(f);
    auto n_uavs = get<std::int32_t>(f);
    auto n_users = get<std::int32_t>(f);
    auto hidden_count = get<std::uint32_t>(f);
    std::vector<int> hidden(hidden_count);
    for (auto& h : hidden) h = get<std::int32_t>(f);

    LoadedCheckpoint out{HybridPolicy(obs_dim, n_uavs, n_users, hidden, 0), Adam{}, Adam{},
                         Rng::State{}, config_hash, episodes};
    get_tensors(f, out.policy.actor_params());
    get_tensors(f, out.policy.critic_params());
    out.actor_opt.init(out.policy.actor_params());
    out.critic_opt.init(out.policy.critic_params());
    get_adam(f, out.actor_opt);
    get_adam(f, out.critic_opt);

    out.action_rng.counter = get<std::uint64_t>(f);
    out.action_rng.spare = get<double>(f);
    out.action_rng.have_spare = get<std::uint8_t>(f) != 0;
    return out;
}

}  // namespace lawn
