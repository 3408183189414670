#pragma once

#include <cstdint>
#include <vector>

#include "lawn/environment.hpp"
#include "lawn/mlp.hpp"

namespace lawn {

// Hybrid-action densities, shared by the sampler, the PPO ratio evaluation
// and the test oracles.
double gaussian_log_density(const std::vector<double>& x, const double* mean,
                            const std::vector<double>& log_std);
double categorical_log_mass(const double* logits, int n, int choice);
void softmax(const double* logits, int n, double* probs);
double categorical_entropy(const double* logits, int n);

// Actor-critic pair over a flat observation. The actor trunk feeds a
// continuous mean head (3 per UAV) and one N-way logit block per user; the
// continuous log-std is a free state-independent parameter, clamped to
// [-5, 2]. The critic is a separate trunk with a scalar head.
class HybridPolicy {
public:
    HybridPolicy(int obs_dim, int n_uavs, int n_users, const std::vector<int>& hidden,
                 std::uint64_t seed, double log_std_init = 0.0);

    const std::vector<int>& hidden() const { return hidden_; }
    int obs_dim() const { return obs_dim_; }
    int n_uavs() const { return n_uavs_; }
    int n_users() const { return n_users_; }
    int cont_dim() const { return 3 * n_uavs_; }
    int logit_dim() const { return n_users_ * n_uavs_; }

    struct ActorOut {
        mat::Mat mean;    // B x cont_dim
        mat::Mat logits;  // B x (n_users * n_uavs)
    };
    ActorOut actor_forward(const mat::Mat& obs);
    std::vector<double> value_forward(const mat::Mat& obs);
    void actor_backward(const mat::Mat& d_mean, const mat::Mat& d_logits);
    void critic_backward(const mat::Mat& d_value);

    // clamped log-std actually used by densities
    std::vector<double> effective_log_std() const;
    // gradient gate: 1 where the raw parameter is strictly inside the clamp
    bool log_std_active(int d) const;
    std::vector<double>& log_std_raw() { return log_std_; }
    std::vector<double>& log_std_grad() { return log_std_grad_; }

    struct Sampled {
        std::vector<double> cont;  // raw Gaussian draws (decode clamps later)
        std::vector<int> disc;
        double log_prob = 0.0;
        double value = 0.0;
    };
    Sampled sample(const std::vector<double>& obs, Rng& rng);
    Action greedy(const std::vector<double>& obs);

    double log_prob(const double* mean_row, const double* logits_row,
                    const std::vector<double>& cont, const std::vector<int>& disc) const;

    void zero_grad();
    std::vector<ParamView> actor_params();  // trunk + heads + log_std
    std::vector<ParamView> critic_params();

    static constexpr double kLogStdMin = -5.0;
    static constexpr double kLogStdMax = 2.0;

private:
    int obs_dim_, n_uavs_, n_users_;
    std::vector<int> hidden_;
    Mlp actor_;
    Mlp critic_;
    std::vector<double> log_std_;
    std::vector<double> log_std_grad_;
};

}  // namespace lawn
