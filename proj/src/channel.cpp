#include "lawn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lawn {

void ChannelParams::validate() const {
    if (!(ref_gain > 0.0) || !(path_loss_exp > 0.0) || !(carrier_hz > 0.0) ||
        !(spacing_ratio > 0.0) || !(noise_power > 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument("channel params must be positive");
    if (rician_factor < 0.0) throw std::invalid_argument("rician factor must be >= 0");
}

std::pair<double, double> aods(Vec3 uav, Vec3 user) {
    Vec3 d = uav - user;
    double dist = norm(d);
    if (!(dist > 0.0)) throw std::invalid_argument("aods: coincident points");
    double cy = std::clamp(d.y / dist, -1.0, 1.0);
    double sz = std::clamp(uav.z / dist, -1.0, 1.0);
    return {std::acos(cy), std::asin(sz)};
}

cvec los_steering(double theta, double varpi, int array_rows, int array_cols,
                  double spacing_ratio) {
    if (array_rows < 1 || array_cols < 1)
        throw std::invalid_argument("los_steering: array dims must be >= 1");
    const double step = -2.0 * M_PI * spacing_ratio * std::sin(varpi) * std::cos(theta);
    cvec out(static_cast<std::size_t>(array_rows) * array_cols);
    for (int ax = 0; ax < array_rows; ++ax) {
        for (int ay = 0; ay < array_cols; ++ay) {
            double phase = step * (ax + ay);
            out[static_cast<std::size_t>(ax) * array_cols + ay] = {std::cos(phase),
                                                                   std::sin(phase)};
        }
    }
    return out;
}

ChannelRealization sample_channel(Vec3 uav, Vec3 user, int array_rows, int array_cols,
                                  const ChannelParams& params, Rng& rng) {
    ChannelRealization r;
    r.distance = norm(uav - user);
    auto [theta, varpi] = aods(uav, user);
    r.los = los_steering(theta, varpi, array_rows, array_cols, params.spacing_ratio);
    r.path_gain = params.ref_gain * std::pow(r.distance, -params.path_loss_exp);

    const std::size_t nr = r.los.size();
    r.nlos.resize(nr);
    for (auto& v : r.nlos) v = rng.cnormal();

    r.h.resize(nr);
    double amp = std::sqrt(r.path_gain);
    if (params.pure_los) {
        for (std::size_t i = 0; i < nr; ++i) r.h[i] = amp * r.los[i];
    } else {
        double w_los = std::sqrt(params.rician_factor / (1.0 + params.rician_factor));
        double w_nlos = std::sqrt(1.0 / (1.0 + params.rician_factor));
        for (std::size_t i = 0; i < nr; ++i)
            r.h[i] = amp * (w_los * r.los[i] + w_nlos * r.nlos[i]);
    }
    return r;
}

std::pair<double, double> sinr_and_rate(
    int user, const std::vector<std::vector<std::uint8_t>>& assoc,
    const std::vector<std::vector<cvec>>& beams,
    const std::vector<std::vector<ChannelRealization>>& channels, double noise_power,
    double bandwidth_hz) {
    const int n_uavs = static_cast<int>(assoc.size());
    const int n_users = n_uavs > 0 ? static_cast<int>(assoc[0].size()) : 0;

    int serving = -1;
    for (int n = 0; n < n_uavs; ++n) {
        if (assoc[n][user]) {
            if (serving >= 0) throw std::invalid_argument("sinr_and_rate: user multiply served");
            serving = n;
        }
    }
    if (serving < 0) throw std::invalid_argument("sinr_and_rate: user not associated");

    auto beam_power = [&](int j, int i, int rx_user) {
        const cvec& w = beams[j][i];
        if (w.empty()) return 0.0;
        return std::norm(inner(w, channels[j][rx_user].h));
    };

    double signal = beam_power(serving, user, user);
    double interference = 0.0;
    for (int j = 0; j < n_uavs; ++j)
        for (int i = 0; i < n_users; ++i)
            if (assoc[j][i] && i != user) interference += beam_power(j, i, user);

    double sinr = signal / (interference + noise_power);
    double rate = bandwidth_hz * std::log2(1.0 + sinr);
    return {sinr, rate};
}

}  // namespace lawn
