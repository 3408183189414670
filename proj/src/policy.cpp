#include "lawn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lawn {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // ln sqrt(2*pi)
}

double gaussian_log_density(const std::vector<double>& x, const double* mean,
                            const std::vector<double>& log_std) {
    double lp = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        double s = std::exp(log_std[d]);
        double z = (x[d] - mean[d]) / s;
        lp += -0.5 * z * z - log_std[d] - kLogSqrt2Pi;
    }
    return lp;
}

void softmax(const double* logits, int n, double* probs) {
    double mx = logits[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        probs[i] = std::exp(logits[i] - mx);
        sum += probs[i];
    }
    for (int i = 0; i < n; ++i) probs[i] /= sum;
}

double categorical_log_mass(const double* logits, int n, int choice) {
    double mx = logits[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::exp(logits[i] - mx);
    return logits[choice] - mx - std::log(sum);
}

double categorical_entropy(const double* logits, int n) {
    std::vector<double> p(n);
    softmax(logits, n, p.data());
    double h = 0.0;
    for (int i = 0; i < n; ++i)
        if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
    return h;
}

HybridPolicy::HybridPolicy(int obs_dim, int n_uavs, int n_users,
                           const std::vector<int>& hidden, std::uint64_t seed,
                           double log_std_init)
    : obs_dim_(obs_dim),
      n_uavs_(n_uavs),
      n_users_(n_users),
      hidden_(hidden),
      actor_([&] {
          Rng rng = derive_rng(seed, 0xAC);
          return Mlp(obs_dim, hidden, {3 * n_uavs, n_users * n_uavs}, rng);
      }()),
      critic_([&] {
          Rng rng = derive_rng(seed, 0xC1);
          return Mlp(obs_dim, hidden, {1}, rng);
      }()),
      log_std_(3 * n_uavs, log_std_init),
      log_std_grad_(3 * n_uavs, 0.0) {}

HybridPolicy::ActorOut HybridPolicy::actor_forward(const mat::Mat& obs) {
    auto outs = actor_.forward(obs);
    return {std::move(outs[0]), std::move(outs[1])};
}

std::vector<double> HybridPolicy::value_forward(const mat::Mat& obs) {
    auto outs = critic_.forward(obs);
    std::vector<double> v(outs[0].rows);
    for (int r = 0; r < outs[0].rows; ++r) v[r] = outs[0](r, 0);
    return v;
}

void HybridPolicy::actor_backward(const mat::Mat& d_mean, const mat::Mat& d_logits) {
    actor_.backward({d_mean, d_logits});
}

void HybridPolicy::critic_backward(const mat::Mat& d_value) { critic_.backward({d_value}); }

std::vector<double> HybridPolicy::effective_log_std() const {
    std::vector<double> out(log_std_.size());
    for (std::size_t d = 0; d < log_std_.size(); ++d)
        out[d] = std::clamp(log_std_[d], kLogStdMin, kLogStdMax);
    return out;
}

bool HybridPolicy::log_std_active(int d) const {
    return log_std_[d] > kLogStdMin && log_std_[d] < kLogStdMax;
}

HybridPolicy::Sampled HybridPolicy::sample(const std::vector<double>& obs, Rng& rng) {
    mat::Mat x(1, obs_dim_);
    for (int i = 0; i < obs_dim_; ++i) x(0, i) = obs[i];
    ActorOut out = actor_forward(x);
    std::vector<double> ls = effective_log_std();

    Sampled s;
    s.cont.resize(cont_dim());
    for (int d = 0; d < cont_dim(); ++d)
        s.cont[d] = out.mean(0, d) + std::exp(ls[d]) * rng.normal();

    s.disc.resize(n_users_);
    std::vector<double> probs(n_uavs_);
    for (int k = 0; k < n_users_; ++k) {
        const double* block = out.logits.row(0) + k * n_uavs_;
        softmax(block, n_uavs_, probs.data());
        double u = rng.uniform();
        int pick = n_uavs_ - 1;
        double acc = 0.0;
        for (int n = 0; n < n_uavs_; ++n) {
            acc += probs[n];
            if (u < acc) {
                pick = n;
                break;
            }
        }
        s.disc[k] = pick;
    }

    s.log_prob = log_prob(out.mean.row(0), out.logits.row(0), s.cont, s.disc);
    s.value = value_forward(x)[0];
    return s;
}

Action HybridPolicy::greedy(const std::vector<double>& obs) {
    mat::Mat x(1, obs_dim_);
    for (int i = 0; i < obs_dim_; ++i) x(0, i) = obs[i];
    ActorOut out = actor_forward(x);

    Action a;
    a.accel.assign(out.mean.row(0), out.mean.row(0) + cont_dim());
    a.assoc_choice.resize(n_users_);
    for (int k = 0; k < n_users_; ++k) {
        const double* block = out.logits.row(0) + k * n_uavs_;
        a.assoc_choice[k] =
            static_cast<int>(std::max_element(block, block + n_uavs_) - block);
    }
    return a;
}

double HybridPolicy::log_prob(const double* mean_row, const double* logits_row,
                              const std::vector<double>& cont,
                              const std::vector<int>& disc) const {
    double lp = gaussian_log_density(cont, mean_row, effective_log_std());
    for (int k = 0; k < n_users_; ++k)
        lp += categorical_log_mass(logits_row + k * n_uavs_, n_uavs_, disc[k]);
    return lp;
}

void HybridPolicy::zero_grad() {
    actor_.zero_grad();
    critic_.zero_grad();
    log_std_grad_.assign(log_std_grad_.size(), 0.0);
}

std::vector<ParamView> HybridPolicy::actor_params() {
    auto out = actor_.params();
    out.push_back({log_std_.data(), log_std_grad_.data(), log_std_.size()});
    return out;
}

std::vector<ParamView> HybridPolicy::critic_params() { return critic_.params(); }

}  // namespace lawn
