#include "lawn/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lawn {

std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        const std::vector<std::uint8_t>& dones, double gamma, double lambda) {
    const std::size_t t_len = rewards.size();
    if (values.size() != t_len + 1 || dones.size() != t_len)
        throw std::invalid_argument("gae: misaligned sequence lengths");
    std::vector<double> adv(t_len, 0.0);
    double running = 0.0;
    for (int t = static_cast<int>(t_len) - 1; t >= 0; --t) {
        double next_v = dones[t] ? 0.0 : values[t + 1];
        double delta = rewards[t] + gamma * next_v - values[t];
        running = dones[t] ? delta : delta + gamma * lambda * running;
        adv[t] = running;
    }
    return adv;
}

void RolloutBuffer::push(Transition t) {
    if (data_.size() >= capacity_) throw std::logic_error("RolloutBuffer: capacity exceeded");
    data_.push_back(std::move(t));
    ready_ = false;
}

void RolloutBuffer::clear() {
    data_.clear();
    advantages_.clear();
    returns_.clear();
    ready_ = false;
}

void RolloutBuffer::compute_gae(double gamma, double lambda) {
    if (data_.empty()) throw std::logic_error("RolloutBuffer: empty");
    if (!data_.back().done)
        throw std::logic_error("RolloutBuffer: last transition must close an episode");
    const std::size_t t_len = data_.size();
    std::vector<double> rewards(t_len), values(t_len + 1, 0.0);
    std::vector<std::uint8_t> dones(t_len);
    for (std::size_t t = 0; t < t_len; ++t) {
        rewards[t] = data_[t].reward;
        values[t] = data_[t].value;
        dones[t] = data_[t].done;
    }
    advantages_ = gae(rewards, values, dones, gamma, lambda);
    returns_.resize(t_len);
    for (std::size_t t = 0; t < t_len; ++t) returns_[t] = advantages_[t] + values[t];
    ready_ = true;
}

namespace {

void fisher_yates(std::vector<int>& idx, Rng& rng) {
    for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i) {
        int j = rng.uniform_int(i + 1);
        std::swap(idx[i], idx[j]);
    }
}

}  // namespace

UpdateMetrics ppo_update(const RolloutBuffer& buffer, HybridPolicy& policy, Adam& actor_opt,
                         Adam& critic_opt, const PpoHyper& hyper, Rng& rng) {
    if (!buffer.ready()) throw std::logic_error("ppo_update: advantages not computed");
    const auto& data = buffer.transitions();
    const int total = static_cast<int>(data.size());

    // batch-normalized advantages
    std::vector<double> adv(buffer.advantages());
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= total;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    double stdev = std::sqrt(var / total);
    if (stdev < 1e-8) stdev = 1e-8;
    for (double& a : adv) a = (a - mean) / stdev;

    const int cont_dim = policy.cont_dim();
    const int n_users = policy.n_users();
    const int n_uavs = policy.n_uavs();
    const double eps = hyper.clip_epsilon;

    UpdateMetrics metrics;
    double clip_hits = 0.0, clip_total = 0.0;

    std::vector<int> idx(total);
    for (int i = 0; i < total; ++i) idx[i] = i;

    auto actor_params = policy.actor_params();
    auto critic_params = policy.critic_params();

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        fisher_yates(idx, rng);
        for (int start = 0; start < total; start += hyper.minibatch_size) {
            const int b = std::min(hyper.minibatch_size, total - start);

            mat::Mat obs(b, policy.obs_dim());
            for (int r = 0; r < b; ++r) {
                const auto& tr = data[idx[start + r]];
                std::copy(tr.obs.begin(), tr.obs.end(), obs.row(r));
            }

            HybridPolicy::ActorOut out = policy.actor_forward(obs);
            std::vector<double> values = policy.value_forward(obs);
            std::vector<double> ls = policy.effective_log_std();
            policy.zero_grad();  // log-std grads accumulate inside the sample loop

            mat::Mat d_mean(b, cont_dim);
            mat::Mat d_logits(b, policy.logit_dim());
            mat::Mat d_value(b, 1);
            d_mean.set_zero();
            d_logits.set_zero();
            auto& ls_grad = policy.log_std_grad();

            double batch_obj = 0.0, batch_crit = 0.0, batch_ent = 0.0;
            std::vector<double> probs(n_uavs);

            for (int r = 0; r < b; ++r) {
                const auto& tr = data[idx[start + r]];
                const double a_hat = adv[idx[start + r]];
                const double* mean_row = out.mean.row(r);
                const double* logit_row = out.logits.row(r);

                double lp = policy.log_prob(mean_row, logit_row, tr.cont, tr.disc);
                double ratio = std::exp(lp - tr.log_prob);
                double unclipped = ratio * a_hat;
                double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * a_hat;
                bool take_unclipped = unclipped <= clipped;
                batch_obj += std::min(unclipped, clipped);
                clip_total += 1.0;
                if (ratio < 1.0 - eps || ratio > 1.0 + eps) clip_hits += 1.0;

                // d(-J)/d(logp): surrogate term flows only through the
                // unclipped branch of the min
                double g_lp = take_unclipped ? -(ratio * a_hat) / b : 0.0;

                double ent = 0.0;
                for (int d = 0; d < cont_dim; ++d) {
                    double sd = std::exp(ls[d]);
                    double z = (tr.cont[d] - mean_row[d]) / sd;
                    d_mean(r, d) = g_lp * (z / sd);
                    if (policy.log_std_active(d)) {
                        ls_grad[d] += g_lp * (z * z - 1.0);
                        ls_grad[d] += -hyper.entropy_coef / b;  // dH/dls = 1
                    }
                    ent += ls[d] + 0.5 * std::log(2.0 * M_PI * std::exp(1.0));
                }

                for (int k = 0; k < n_users; ++k) {
                    const double* block = logit_row + k * n_uavs;
                    softmax(block, n_uavs, probs.data());
                    double h = 0.0;
                    for (int j = 0; j < n_uavs; ++j)
                        if (probs[j] > 0.0) h -= probs[j] * std::log(probs[j]);
                    ent += h;
                    for (int j = 0; j < n_uavs; ++j) {
                        double onehot = j == tr.disc[k] ? 1.0 : 0.0;
                        double dlp = onehot - probs[j];
                        double dh = probs[j] > 0.0 ? -probs[j] * (std::log(probs[j]) + h) : 0.0;
                        d_logits(r, k * n_uavs + j) =
                            g_lp * dlp - hyper.entropy_coef * dh / b;
                    }
                }
                batch_ent += ent;
                batch_obj += hyper.entropy_coef * ent;

                double verr = values[r] - buffer.returns()[idx[start + r]];
                batch_crit += verr * verr;
                d_value(r, 0) = 2.0 * verr / b;
            }

            policy.actor_backward(d_mean, d_logits);
            policy.critic_backward(d_value);

            clip_grad_norm(actor_params, hyper.grad_norm_cap);
            clip_grad_norm(critic_params, hyper.grad_norm_cap);

            if (!grads_finite(actor_params) || !grads_finite(critic_params)) {
                ++metrics.skipped_minibatches;
            } else {
                actor_opt.step(actor_params);
                critic_opt.step(critic_params);
            }
            ++metrics.minibatches;
            metrics.actor_objective += batch_obj / b;
            metrics.critic_loss += batch_crit / b;
            metrics.entropy += batch_ent / b;
        }
    }

    if (metrics.minibatches > 0) {
        metrics.actor_objective /= metrics.minibatches;
        metrics.critic_loss /= metrics.minibatches;
        metrics.entropy /= metrics.minibatches;
    }
    metrics.clip_fraction = clip_total > 0.0 ? clip_hits / clip_total : 0.0;
    return metrics;
}

TrainResult train(Environment& env, const PpoHyper& hyper, std::uint64_t seed,
                  const std::function<void(const EpisodeLog&)>& on_episode) {
    if (hyper.buffer_capacity < env.config().horizon)
        throw std::invalid_argument("train: buffer smaller than one episode");

    HybridPolicy policy(env.obs_dim(), env.n_uavs(), env.n_users(), hyper.hidden,
                        derive_seed(seed, 0x11), hyper.log_std_init);
    Adam actor_opt(hyper.learning_rate), critic_opt(hyper.learning_rate);
    actor_opt.init(policy.actor_params());
    critic_opt.init(policy.critic_params());

    Rng action_rng = derive_rng(seed, 0x22);
    Rng update_rng = derive_rng(seed, 0x33);
    RolloutBuffer buffer(hyper.buffer_capacity);

    std::vector<EpisodeLog> logs;
    logs.reserve(hyper.max_episodes);

    for (int e = 0; e < hyper.max_episodes; ++e) {
        std::vector<double> obs = env.reset(e);
        EpisodeLog log;
        log.episode = e;

        while (!env.done()) {
            HybridPolicy::Sampled s = policy.sample(obs, action_rng);
            Action act;
            act.accel = s.cont;
            act.assoc_choice = s.disc;
            StepResult res = env.step(act);

            Transition tr;
            tr.obs = std::move(obs);
            tr.cont = std::move(s.cont);
            tr.disc = std::move(s.disc);
            tr.log_prob = s.log_prob;
            tr.reward = res.reward;
            tr.value = s.value;
            tr.done = res.done ? 1 : 0;
            buffer.push(std::move(tr));

            obs = std::move(res.observation);
            ++log.steps;
            log.reward_sum += res.reward;
            log.s_total_sum += res.diag.reward.s_total;
            if (res.diag.boundary_violations > 0) ++log.boundary_violation_slots;
            if (res.diag.obstacle_violations > 0) ++log.obstacle_violation_slots;
            if (res.diag.separation_violations > 0) ++log.separation_violation_slots;
            log.failures += res.diag.failures_this_slot;
        }

        bool buffer_nearly_full =
            buffer.size() + static_cast<std::size_t>(env.config().horizon) > buffer.capacity();
        if ((e + 1) % hyper.episodes_per_update == 0 || buffer_nearly_full) {
            buffer.compute_gae(hyper.gamma, hyper.gae_lambda);
            log.update = ppo_update(buffer, policy, actor_opt, critic_opt, hyper, update_rng);
            log.updated = true;
            buffer.clear();
        }

        logs.push_back(log);
        if (on_episode) on_episode(log);
    }

    return {std::move(policy), std::move(actor_opt), std::move(critic_opt), action_rng.state(),
            std::move(logs)};
}

}  // namespace lawn
