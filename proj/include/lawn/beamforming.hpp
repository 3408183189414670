#pragma once

#include <complex>
#include <vector>

#include "lawn/channel.hpp"

namespace lawn {

// Channel pseudo-inverse basis for one UAV's associated users.
// matrix H has one row per user (K' x N_r); pinv = H^H (H H^H)^-1 is stored
// column-wise; cost[k] = [pinv^H pinv]_kk is the transmit power spent per unit
// received power on stream k.
struct ZfBasis {
    int n_users = 0;
    int n_antennas = 0;
    std::vector<cvec> pinv_cols;  // K' columns of length N_r
    std::vector<double> cost;     // K' positive scalars
};

struct WaterFillDiagnostics {
    double mu_lo0 = 0.0;  // bracket after widening, before bisection
    double mu_hi0 = 0.0;
    int bisection_iterations = 0;
};

struct BeamformingSolution {
    std::vector<cvec> beams;      // per user; empty vector = zero power
    std::vector<double> powers;   // transmit power per user (W)
    double water_level = 0.0;     // the dual variable mu, 1/W
    double sum_power = 0.0;       // W
    std::vector<int> dropped;     // users zeroed by the rank fallback
    WaterFillDiagnostics diag;
};

// rows: one channel vector per associated user. Throws std::domain_error when
// the Gram matrix is rank-deficient or has condition number beyond the limit;
// the caller is expected to drop a user and retry.
ZfBasis zf_basis(const std::vector<cvec>& rows, double condition_limit = 1e12);

// p_k = [1/mu - noise * cost_k]^+ with mu found by bisection until
// |sum p - p_max| <= eps. Returns powers and mu; diagnostics expose the
// initial bracket and iteration count.
std::vector<double> water_fill(const std::vector<double>& cost, double noise_power,
                               double p_max, double eps, double& mu_out,
                               WaterFillDiagnostics* diag = nullptr);

// beams[k] = pinv_col_k * sqrt(p_k / cost_k), so stream k transmits p_k watts
// and delivers p_k / cost_k to its user.
BeamformingSolution assemble_beams(const ZfBasis& basis, const std::vector<double>& powers,
                                   double mu);

// Full per-UAV solve: pseudo-inverse, dropping the weakest-channel user while
// the basis is ill-conditioned; water-filling on the survivors. Dropped users
// keep their association but get an empty beam this slot.
// When literal_cost is set the per-user cost is ||h_k||^2 instead of the
// KKT-consistent [pinv^H pinv]_kk (printed-formula reproduction mode).
BeamformingSolution solve_zf_waterfill(const std::vector<cvec>& rows, double noise_power,
                                       double p_max, double eps_rel = 1e-6,
                                       bool literal_cost = false,
                                       double condition_limit = 1e12);

// CSI-agnostic baseline: every user gets the same all-equal-phase direction,
// scaled so each stream transmits p_max / K'.
BeamformingSolution equal_beamforming(int n_users, int n_antennas, double p_max);

}  // namespace lawn
