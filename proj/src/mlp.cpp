#include "lawn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace lawn {

void orthogonal_init(mat::Mat& w, Rng& rng, double gain) {
    // orthogonalize along the shorter side of a Gaussian draw
    const int rows = w.rows, cols = w.cols;
    const bool wide = cols >= rows;
    const int vecs = wide ? rows : cols;
    const int dim = wide ? cols : rows;

    std::vector<std::vector<double>> basis(vecs, std::vector<double>(dim));
    for (auto& v : basis)
        for (auto& x : v) x = rng.normal();

    for (int i = 0; i < vecs; ++i) {
        for (int j = 0; j < i; ++j) {
            double proj = 0.0;
            for (int d = 0; d < dim; ++d) proj += basis[i][d] * basis[j][d];
            for (int d = 0; d < dim; ++d) basis[i][d] -= proj * basis[j][d];
        }
        double n2 = 0.0;
        for (double x : basis[i]) n2 += x * x;
        double inv = 1.0 / std::sqrt(std::max(n2, 1e-300));
        for (auto& x : basis[i]) x *= inv;
    }

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) w(r, c) = gain * (wide ? basis[r][c] : basis[c][r]);
}

Mlp::Mlp(int in_dim, const std::vector<int>& hidden, const std::vector<int>& head_dims,
         Rng& rng, double trunk_gain, double head_gain)
    : in_dim_(in_dim) {
    if (head_dims.empty()) throw std::invalid_argument("Mlp: need at least one head");
    int cur = in_dim;
    for (int h : hidden) {
        trunk_.emplace_back(h, cur);
        orthogonal_init(trunk_.back().w, rng, trunk_gain);
        cur = h;
    }
    for (int d : head_dims) {
        heads_.emplace_back(d, cur);
        orthogonal_init(heads_.back().w, rng, head_gain);
    }
}

std::vector<mat::Mat> Mlp::forward(const mat::Mat& x) {
    if (x.cols != in_dim_) throw std::invalid_argument("Mlp::forward: input dim mismatch");
    input_ = x;
    activations_.clear();
    const mat::Mat* cur = &input_;
    for (auto& layer : trunk_) {
        mat::Mat z(cur->rows, layer.w.rows);
        mat::gemm_nt(*cur, layer.w, z);
        mat::add_row_bias(z, layer.b);
        mat::tanh_inplace(z);
        activations_.push_back(std::move(z));
        cur = &activations_.back();
    }
    std::vector<mat::Mat> outs;
    outs.reserve(heads_.size());
    for (auto& head : heads_) {
        mat::Mat y(cur->rows, head.w.rows);
        mat::gemm_nt(*cur, head.w, y);
        mat::add_row_bias(y, head.b);
        outs.push_back(std::move(y));
    }
    return outs;
}

void Mlp::backward(const std::vector<mat::Mat>& head_grads) {
    if (head_grads.size() != heads_.size())
        throw std::invalid_argument("Mlp::backward: head gradient count mismatch");
    const int batch = input_.rows;
    const mat::Mat& last_act = activations_.empty() ? input_ : activations_.back();

    mat::Mat d_act(batch, last_act.cols);
    d_act.set_zero();
    for (std::size_t i = 0; i < heads_.size(); ++i) {
        Linear& head = heads_[i];
        mat::Mat dw(head.w.rows, head.w.cols);
        mat::gemm_tn(head_grads[i], last_act, dw);
        for (std::size_t j = 0; j < dw.d.size(); ++j) head.dw.d[j] += dw.d[j];
        std::vector<double> db;
        mat::col_sum(head_grads[i], db);
        for (std::size_t j = 0; j < db.size(); ++j) head.db[j] += db[j];

        mat::Mat da(batch, last_act.cols);
        mat::gemm(head_grads[i], head.w, da);
        for (std::size_t j = 0; j < da.d.size(); ++j) d_act.d[j] += da.d[j];
    }

    for (int l = static_cast<int>(trunk_.size()) - 1; l >= 0; --l) {
        Linear& layer = trunk_[l];
        const mat::Mat& act = activations_[l];
        const mat::Mat& below = l == 0 ? input_ : activations_[l - 1];

        mat::Mat dz(batch, act.cols);
        mat::tanh_backward(act, d_act, dz);

        mat::Mat dw(layer.w.rows, layer.w.cols);
        mat::gemm_tn(dz, below, dw);
        for (std::size_t j = 0; j < dw.d.size(); ++j) layer.dw.d[j] += dw.d[j];
        std::vector<double> db;
        mat::col_sum(dz, db);
        for (std::size_t j = 0; j < db.size(); ++j) layer.db[j] += db[j];

        if (l > 0) {
            d_act = mat::Mat(batch, below.cols);
            mat::gemm(dz, layer.w, d_act);
        }
    }
}

void Mlp::zero_grad() {
    for (auto& l : trunk_) {
        l.dw.set_zero();
        l.db.assign(l.db.size(), 0.0);
    }
    for (auto& h : heads_) {
        h.dw.set_zero();
        h.db.assign(h.db.size(), 0.0);
    }
}

std::vector<ParamView> Mlp::params() {
    std::vector<ParamView> out;
    auto add = [&](Linear& l) {
        out.push_back({l.w.d.data(), l.dw.d.data(), l.w.d.size()});
        out.push_back({l.b.data(), l.db.data(), l.b.size()});
    };
    for (auto& l : trunk_) add(l);
    for (auto& h : heads_) add(h);
    return out;
}

void Adam::init(const std::vector<ParamView>& params) {
    m_.clear();
    v_.clear();
    for (const auto& p : params) {
        m_.emplace_back(p.size, 0.0);
        v_.emplace_back(p.size, 0.0);
    }
    t_ = 0;
}

void Adam::step(const std::vector<ParamView>& params) {
    if (m_.size() != params.size()) throw std::logic_error("Adam: not initialized for these params");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const ParamView& p = params[i];
        auto& m = m_[i];
        auto& v = v_[i];
#pragma omp parallel for schedule(static) if (p.size > 4096)
        for (long long j = 0; j < static_cast<long long>(p.size); ++j) {
            double g = p.grad[j];
            m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
            v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
            double mhat = m[j] / bc1;
            double vhat = v[j] / bc2;
            p.value[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

double clip_grad_norm(const std::vector<ParamView>& params, double max_norm) {
    double sq = 0.0;
    for (const auto& p : params)
        for (std::size_t j = 0; j < p.size; ++j) sq += p.grad[j] * p.grad[j];
    double nrm = std::sqrt(sq);
    if (nrm > max_norm && nrm > 0.0) {
        double scale = max_norm / nrm;
        for (const auto& p : params)
            for (std::size_t j = 0; j < p.size; ++j) p.grad[j] *= scale;
    }
    return nrm;
}

bool grads_finite(const std::vector<ParamView>& params) {
    for (const auto& p : params)
        for (std::size_t j = 0; j < p.size; ++j)
            if (!std::isfinite(p.grad[j])) return false;
    return true;
}

}  // namespace lawn
