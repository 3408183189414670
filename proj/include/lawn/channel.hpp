#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "lawn/geometry.hpp"
#include "lawn/rng.hpp"

namespace lawn {

using cvec = std::vector<std::complex<double>>;

struct ChannelParams {
    double ref_gain = 1e-3;        // channel power gain at 1 m, linear
    double path_loss_exp = 2.2;
    double rician_factor = 10.0;   // LoS-to-NLoS power ratio
    bool pure_los = false;         // treat the Rician factor as infinite
    double carrier_hz = 2.4e9;
    double spacing_ratio = 0.5;    // antenna spacing in carrier wavelengths
    double noise_power = 3.1622776601683794e-10;  // W (-65 dBm)
    double bandwidth_hz = 1e6;

    void validate() const;
};

struct ChannelRealization {
    cvec h;        // length array_rows * array_cols
    double distance = 0.0;
    cvec los;      // unit-modulus entries
    cvec nlos;
    double path_gain = 0.0;  // ref_gain * distance^-beta
};

// Horizontal and vertical departure angles toward a ground point.
// theta in [0, pi], varpi in [0, pi/2]. Zero distance is rejected.
std::pair<double, double> aods(Vec3 uav, Vec3 user);

// Uniform planar array response: Kronecker product of the two per-axis phase
// progressions. Entry (a_x, a_y) sits at index (a_x-1)*cols + (a_y-1) and has
// phase -2*pi*spacing_ratio*sin(varpi)*cos(theta)*((a_x-1)+(a_y-1)).
cvec los_steering(double theta, double varpi, int array_rows, int array_cols,
                  double spacing_ratio);

// One Rician draw for a (UAV, user) link. Deterministic given the rng state.
ChannelRealization sample_channel(Vec3 uav, Vec3 user, int array_rows, int array_cols,
                                  const ChannelParams& params, Rng& rng);

inline std::complex<double> inner(const cvec& w, const cvec& h) {
    // <w, h> = w^H h
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) acc += std::conj(w[i]) * h[i];
    return acc;
}

// Physical downlink SINR of user k: every active stream (j, i) with i != k
// interferes through the channel from UAV j to user k.
// channels[j][k] is the UAV j -> user k realization; beams[j][i] may be empty
// (zero power). Returns (linear SINR, rate in bit/s).
std::pair<double, double> sinr_and_rate(
    int user, const std::vector<std::vector<std::uint8_t>>& assoc,
    const std::vector<std::vector<cvec>>& beams,
    const std::vector<std::vector<ChannelRealization>>& channels, double noise_power,
    double bandwidth_hz);

}  // namespace lawn
