#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lawn/environment.hpp"
#include "lawn/policy.hpp"

namespace lawn {

// Exponentially weighted advantage estimates. values carries one bootstrap
// entry beyond the rewards (size T+1); a done at t cuts the recursion and
// replaces the bootstrap with zero.
std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        const std::vector<std::uint8_t>& dones, double gamma, double lambda);

struct Transition {
    std::vector<double> obs;
    std::vector<double> cont;
    std::vector<int> disc;
    double log_prob = 0.0;
    double reward = 0.0;
    double value = 0.0;
    std::uint8_t done = 0;
};

// On-policy rollout storage. Despite the stated capacity it is cleared after
// every update cycle; no transition feeds more than one update.
class RolloutBuffer {
public:
    explicit RolloutBuffer(std::size_t capacity) : capacity_(capacity) {}

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool ready() const { return ready_; }
    void clear();

    // fills advantages and returns; requires the last stored transition to be
    // an episode end
    void compute_gae(double gamma, double lambda);

    const std::vector<Transition>& transitions() const { return data_; }
    const std::vector<double>& advantages() const { return advantages_; }
    const std::vector<double>& returns() const { return returns_; }

private:
    std::size_t capacity_;
    std::vector<Transition> data_;
    std::vector<double> advantages_;
    std::vector<double> returns_;
    bool ready_ = false;
};

struct PpoHyper {
    double learning_rate = 5e-4;
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    int epochs = 10;
    int minibatch_size = 256;
    double entropy_coef = 0.01;
    double grad_norm_cap = 0.5;
    std::vector<int> hidden = {256, 128};
    int buffer_capacity = 50000;
    int episodes_per_update = 1;
    int max_episodes = 1000;
    double log_std_init = 0.0;
};

struct UpdateMetrics {
    double actor_objective = 0.0;  // clipped surrogate + entropy bonus, maximized
    double critic_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    int minibatches = 0;
    int skipped_minibatches = 0;  // non-finite gradients
};

// One clipped-surrogate update cycle over the buffer (advantages must be
// computed). The buffer is not cleared here; the caller owns that.
UpdateMetrics ppo_update(const RolloutBuffer& buffer, HybridPolicy& policy, Adam& actor_opt,
                         Adam& critic_opt, const PpoHyper& hyper, Rng& rng);

struct EpisodeLog {
    int episode = 0;
    int steps = 0;
    double reward_sum = 0.0;
    double s_total_sum = 0.0;
    int boundary_violation_slots = 0;
    int obstacle_violation_slots = 0;
    int separation_violation_slots = 0;
    int failures = 0;
    bool updated = false;
    UpdateMetrics update;
};

struct TrainResult {
    HybridPolicy policy;
    Adam actor_opt;
    Adam critic_opt;
    Rng::State action_rng;
    std::vector<EpisodeLog> logs;
};

// Alternates rollout collection (with the per-slot beamforming solve inside
// the environment step) and PPO updates for max_episodes episodes.
TrainResult train(Environment& env, const PpoHyper& hyper, std::uint64_t seed,
                  const std::function<void(const EpisodeLog&)>& on_episode = {});

}  // namespace lawn
