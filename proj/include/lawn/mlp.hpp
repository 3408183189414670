#pragma once

#include <cstddef>
#include <vector>

#include "lawn/mat.hpp"
#include "lawn/rng.hpp"

namespace lawn {

// Mutable view over one parameter tensor and its gradient, in a fixed order.
// Optimizers, checkpoints and the finite-difference checks all walk the same
// list, so parameter ordering is part of the on-disk contract.
struct ParamView {
    double* value = nullptr;
    double* grad = nullptr;
    std::size_t size = 0;
};

struct Linear {
    mat::Mat w;  // out x in
    std::vector<double> b;
    mat::Mat dw;
    std::vector<double> db;

    Linear() = default;
    Linear(int out, int in)
        : w(out, in), b(out, 0.0), dw(out, in), db(out, 0.0) {}
};

// Tanh trunk with any number of linear heads hanging off the last hidden
// layer. forward() caches activations for the matching backward().
class Mlp {
public:
    Mlp(int in_dim, const std::vector<int>& hidden, const std::vector<int>& head_dims,
        Rng& rng, double trunk_gain = 1.0, double head_gain = 0.01);

    int in_dim() const { return in_dim_; }
    int n_heads() const { return static_cast<int>(heads_.size()); }
    int head_dim(int i) const { return heads_[i].w.rows; }

    // batch x in -> one batch x head_dim matrix per head
    std::vector<mat::Mat> forward(const mat::Mat& x);

    // head_grads[i] is d(loss)/d(head output i); accumulates into the
    // parameter gradients (callers zero them between minibatches)
    void backward(const std::vector<mat::Mat>& head_grads);

    void zero_grad();
    std::vector<ParamView> params();

private:
    int in_dim_;
    std::vector<Linear> trunk_;
    std::vector<Linear> heads_;

    // forward cache
    mat::Mat input_;
    std::vector<mat::Mat> activations_;  // post-tanh per trunk layer
};

// Gram-Schmidt orthogonalized Gaussian init, scaled by gain.
void orthogonal_init(mat::Mat& w, Rng& rng, double gain);

class Adam {
public:
    explicit Adam(double lr = 5e-4, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void init(const std::vector<ParamView>& params);
    void step(const std::vector<ParamView>& params);

    int step_count() const { return t_; }
    double learning_rate() const { return lr_; }

    // flat moment access for checkpointing
    std::vector<std::vector<double>>& first_moments() { return m_; }
    std::vector<std::vector<double>>& second_moments() { return v_; }
    void set_step_count(int t) { t_ = t; }

private:
    double lr_, beta1_, beta2_, eps_;
    int t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

// global gradient-norm cap; returns the pre-clip norm
double clip_grad_norm(const std::vector<ParamView>& params, double max_norm);

bool grads_finite(const std::vector<ParamView>& params);

}  // namespace lawn
