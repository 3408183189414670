#include "lawn/beamforming.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lawn {

namespace {

using CMat = Eigen::MatrixXcd;

double sum_powers_at(const std::vector<double>& scaled_cost, double inv_mu) {
    double s = 0.0;
    for (double c : scaled_cost) s += std::max(inv_mu - c, 0.0);
    return s;
}

}  // namespace

ZfBasis zf_basis(const std::vector<cvec>& rows, double condition_limit) {
    const int k = static_cast<int>(rows.size());
    if (k == 0) throw std::invalid_argument("zf_basis: no users");
    const int nr = static_cast<int>(rows[0].size());
    if (k > nr) throw std::domain_error("zf_basis: more users than antennas");

    // rows are conjugated so that columns of the pseudo-inverse null the
    // received form w^H h, not the transpose form h^T w
    CMat h(k, nr);
    for (int r = 0; r < k; ++r) {
        if (static_cast<int>(rows[r].size()) != nr)
            throw std::invalid_argument("zf_basis: ragged channel rows");
        for (int c = 0; c < nr; ++c) h(r, c) = std::conj(rows[r][c]);
    }

    CMat gram = h * h.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(gram);
    const auto& ev = es.eigenvalues();
    double lo = ev.minCoeff();
    double hi = ev.maxCoeff();
    if (!(lo > 0.0) || hi / lo > condition_limit)
        throw std::domain_error("zf_basis: ill-conditioned channel matrix");

    CMat pinv = h.adjoint() * gram.inverse();  // N_r x K'

    ZfBasis basis;
    basis.n_users = k;
    basis.n_antennas = nr;
    basis.pinv_cols.resize(k);
    basis.cost.resize(k);
    for (int c = 0; c < k; ++c) {
        basis.pinv_cols[c].resize(nr);
        double nrm2 = 0.0;
        for (int r = 0; r < nr; ++r) {
            basis.pinv_cols[c][r] = pinv(r, c);
            nrm2 += std::norm(pinv(r, c));
        }
        basis.cost[c] = nrm2;  // [pinv^H pinv]_kk
    }
    return basis;
}

std::vector<double> water_fill(const std::vector<double>& cost, double noise_power,
                               double p_max, double eps, double& mu_out,
                               WaterFillDiagnostics* diag) {
    if (cost.empty()) throw std::invalid_argument("water_fill: empty cost vector");
    if (!(noise_power > 0.0) || !(p_max > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("water_fill: inputs must be positive");
    for (double c : cost)
        if (!(c > 0.0)) throw std::invalid_argument("water_fill: costs must be positive");

    std::vector<double> scaled(cost.size());
    for (std::size_t i = 0; i < cost.size(); ++i) scaled[i] = noise_power * cost[i];
    const double c_min = *std::min_element(scaled.begin(), scaled.end());
    const double c_max = *std::max_element(scaled.begin(), scaled.end());

    // P_sum(mu) decreases in mu. At mu_hi = 1/c_min every power is zero; the
    // lower end starts at 1/c_max and widens geometrically until it brackets.
    double mu_hi = 1.0 / c_min;
    double mu_lo = 1.0 / c_max;
    int widenings = 0;
    while (sum_powers_at(scaled, 1.0 / mu_lo) < p_max) {
        mu_lo *= 0.5;
        if (++widenings > 2048) throw std::logic_error("water_fill: bracket failure");
    }

    if (diag) {
        diag->mu_lo0 = mu_lo;
        diag->mu_hi0 = mu_hi;
        diag->bisection_iterations = 0;
    }

    double mu_mid = 0.5 * (mu_lo + mu_hi);
    double p_sum = sum_powers_at(scaled, 1.0 / mu_mid);
    int iters = 0;
    while (std::abs(p_sum - p_max) > eps) {
        if (p_sum > p_max)
            mu_lo = mu_mid;
        else
            mu_hi = mu_mid;
        mu_mid = 0.5 * (mu_lo + mu_hi);
        p_sum = sum_powers_at(scaled, 1.0 / mu_mid);
        if (++iters > 4096) throw std::logic_error("water_fill: bisection did not terminate");
    }
    if (diag) diag->bisection_iterations = iters;

    mu_out = mu_mid;
    std::vector<double> p(cost.size());
    for (std::size_t i = 0; i < cost.size(); ++i) p[i] = std::max(1.0 / mu_mid - scaled[i], 0.0);
    return p;
}

BeamformingSolution assemble_beams(const ZfBasis& basis, const std::vector<double>& powers,
                                   double mu) {
    if (static_cast<int>(powers.size()) != basis.n_users)
        throw std::invalid_argument("assemble_beams: power count mismatch");
    BeamformingSolution sol;
    sol.water_level = mu;
    sol.beams.resize(basis.n_users);
    sol.powers = powers;
    for (int k = 0; k < basis.n_users; ++k) {
        sol.sum_power += powers[k];
        if (powers[k] <= 0.0) continue;  // empty beam
        double scale = std::sqrt(powers[k] / basis.cost[k]);
        sol.beams[k].resize(basis.n_antennas);
        for (int r = 0; r < basis.n_antennas; ++r)
            sol.beams[k][r] = scale * basis.pinv_cols[k][r];
    }
    return sol;
}

BeamformingSolution solve_zf_waterfill(const std::vector<cvec>& rows, double noise_power,
                                       double p_max, double eps_rel, bool literal_cost,
                                       double condition_limit) {
    const int k_total = static_cast<int>(rows.size());
    std::vector<int> active(k_total);
    std::iota(active.begin(), active.end(), 0);
    std::vector<int> dropped;

    auto row_norm2 = [&](int k) {
        double s = 0.0;
        for (auto v : rows[k]) s += std::norm(v);
        return s;
    };

    const int nr = k_total > 0 ? static_cast<int>(rows[0].size()) : 0;
    while (static_cast<int>(active.size()) > nr && !active.empty()) {
        auto weakest = std::min_element(active.begin(), active.end(),
                                        [&](int a, int b) { return row_norm2(a) < row_norm2(b); });
        dropped.push_back(*weakest);
        active.erase(weakest);
    }

    while (!active.empty()) {
        std::vector<cvec> sub;
        sub.reserve(active.size());
        for (int k : active) sub.push_back(rows[k]);
        try {
            ZfBasis basis = zf_basis(sub, condition_limit);
            std::vector<double> cost = basis.cost;
            if (literal_cost)
                for (std::size_t i = 0; i < cost.size(); ++i) cost[i] = row_norm2(active[i]);

            double mu = 0.0;
            WaterFillDiagnostics diag;
            std::vector<double> p = water_fill(cost, noise_power, p_max, eps_rel * p_max, mu, &diag);
            BeamformingSolution sub_sol = assemble_beams(basis, p, mu);

            BeamformingSolution sol;
            sol.water_level = mu;
            sol.sum_power = sub_sol.sum_power;
            sol.diag = diag;
            sol.beams.assign(k_total, cvec{});
            sol.powers.assign(k_total, 0.0);
            for (std::size_t i = 0; i < active.size(); ++i) {
                sol.beams[active[i]] = std::move(sub_sol.beams[i]);
                sol.powers[active[i]] = sub_sol.powers[i];
            }
            std::sort(dropped.begin(), dropped.end());
            sol.dropped = std::move(dropped);
            return sol;
        } catch (const std::domain_error&) {
            auto weakest = std::min_element(
                active.begin(), active.end(),
                [&](int a, int b) { return row_norm2(a) < row_norm2(b); });
            dropped.push_back(*weakest);
            active.erase(weakest);
        }
    }

    BeamformingSolution sol;  // nobody schedulable this slot
    sol.beams.assign(k_total, cvec{});
    sol.powers.assign(k_total, 0.0);
    std::sort(dropped.begin(), dropped.end());
    sol.dropped = std::move(dropped);
    return sol;
}

BeamformingSolution equal_beamforming(int n_users, int n_antennas, double p_max) {
    if (n_users < 1 || n_antennas < 1)
        throw std::invalid_argument("equal_beamforming: need users and antennas");
    BeamformingSolution sol;
    double per_user = p_max / n_users;
    double entry = std::sqrt(per_user / n_antennas);
    sol.beams.assign(n_users, cvec(n_antennas, {entry, 0.0}));
    sol.powers.assign(n_users, per_user);
    sol.sum_power = p_max;
    return sol;
}

}  // namespace lawn
