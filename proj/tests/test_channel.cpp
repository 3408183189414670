#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "lawn/channel.hpp"
#include "lawn/rng.hpp"

using namespace lawn;

namespace {
ChannelParams default_params() { return {}; }
}  // namespace

TEST_CASE("departure angles") {
    auto [t1, p1] = aods({0, 0, 100}, {0, 0, 0});
    CHECK(t1 == doctest::Approx(M_PI / 2));
    CHECK(p1 == doctest::Approx(M_PI / 2));

    auto [t2, p2] = aods({0, 3, 4}, {0, 0, 0});
    CHECK(t2 == doctest::Approx(std::acos(3.0 / 5.0)));
    CHECK(p2 == doctest::Approx(std::asin(4.0 / 5.0)));

    auto [t3, p3] = aods({0, -3, 4}, {0, 0, 0});
    CHECK(t3 == doctest::Approx(std::acos(-3.0 / 5.0)));
    CHECK(t3 > M_PI / 2);
    (void)p3;

    CHECK_THROWS_AS(aods({1, 1, 1}, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("steering vector structure") {
    cvec s1 = los_steering(0.3, 0.9, 1, 1, 0.5);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].real() == doctest::Approx(1.0));
    CHECK(s1[0].imag() == doctest::Approx(0.0));

    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        double theta = rng.uniform(0.0, M_PI);
        double varpi = rng.uniform(0.0, M_PI / 2);
        cvec s = los_steering(theta, varpi, 4, 4, 0.5);
        CHECK(std::abs(s[0] - std::complex<double>{1.0, 0.0}) < 1e-14);
        for (auto e : s) CHECK(std::abs(e) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("per-entry phases match the scalar formula") {
    // independent evaluation of the phase progression for a 2x2 array
    double theta = 0.7, varpi = 1.1, ratio = 0.5;
    cvec s = los_steering(theta, varpi, 2, 2, ratio);
    REQUIRE(s.size() == 4);
    for (int ax = 1; ax <= 2; ++ax) {
        for (int ay = 1; ay <= 2; ++ay) {
            double phase = -2.0 * M_PI * ratio * std::sin(varpi) * std::cos(theta) *
                           ((ax - 1) + (ay - 1));
            std::complex<double> expect{std::cos(phase), std::sin(phase)};
            CHECK(std::abs(s[(ax - 1) * 2 + (ay - 1)] - expect) < 1e-14);
        }
    }
}

TEST_CASE("pure LoS norm identity") {
    ChannelParams p = default_params();
    p.pure_los = true;
    Rng rng(1);
    ChannelRealization r = sample_channel({100, 100, 120}, {40, 60, 0}, 4, 4, p, rng);
    double n2 = 0.0;
    for (auto v : r.h) n2 += std::norm(v);
    CHECK(n2 == doctest::Approx(r.path_gain * 16).epsilon(1e-12));
    CHECK(r.path_gain ==
          doctest::Approx(p.ref_gain * std::pow(r.distance, -p.path_loss_exp)).epsilon(1e-12));
}

TEST_CASE("NLoS-only channel has zero mean") {
    ChannelParams p = default_params();
    p.rician_factor = 0.0;
    Rng rng(2);
    const int draws = 100000;
    std::complex<double> acc{0, 0};
    double amp = 0.0;
    for (int i = 0; i < draws; ++i) {
        ChannelRealization r = sample_channel({10, 0, 100}, {0, 0, 0}, 2, 2, p, rng);
        for (auto v : r.h) acc += v;
        if (i == 0) amp = std::sqrt(r.path_gain);
    }
    // each entry is amp * CN(0,1); mean over draws*4 entries, 3 standard errors
    double se = amp / std::sqrt(2.0 * draws * 4);
    CHECK(std::abs(acc.real() / (draws * 4)) < 3 * se);
    CHECK(std::abs(acc.imag() / (draws * 4)) < 3 * se);
}

TEST_CASE("second moment identity at the Table Rician factor") {
    ChannelParams p = default_params();  // rician 10
    Rng rng(3);
    const int draws = 100000;
    double acc = 0.0;
    double gain = 0.0;
    for (int i = 0; i < draws; ++i) {
        ChannelRealization r = sample_channel({50, 80, 110}, {20, 20, 0}, 2, 2, p, rng);
        for (auto v : r.h) acc += std::norm(v);
        gain = r.path_gain;
    }
    double ratio = acc / draws / (gain * 4);
    CHECK(std::abs(ratio - 1.0) < 0.02);
}

TEST_CASE("same stream state gives bit-identical channels") {
    ChannelParams p = default_params();
    Rng a(77), b(77);
    ChannelRealization r1 = sample_channel({10, 20, 120}, {5, 5, 0}, 4, 4, p, a);
    ChannelRealization r2 = sample_channel({10, 20, 120}, {5, 5, 0}, 4, 4, p, b);
    REQUIRE(r1.h.size() == r2.h.size());
    for (std::size_t i = 0; i < r1.h.size(); ++i) {
        CHECK(r1.h[i].real() == r2.h[i].real());
        CHECK(r1.h[i].imag() == r2.h[i].imag());
    }
}

TEST_CASE("single-link SINR hits the log2 anchor") {
    double noise = 1e-9;
    std::vector<std::vector<std::uint8_t>> assoc{{1}};
    // one antenna; pick w, h with |<w,h>|^2 = noise
    std::vector<std::vector<cvec>> beams{{cvec{{std::sqrt(noise), 0.0}}}};
    ChannelRealization r;
    r.h = {{1.0, 0.0}};
    std::vector<std::vector<ChannelRealization>> channels{{r}};
    auto [sinr, rate] = sinr_and_rate(0, assoc, beams, channels, noise, 1e6);
    CHECK(sinr == doctest::Approx(1.0));
    CHECK(rate == doctest::Approx(1e6));
}

TEST_CASE("two-UAV SINR matches an independent re-evaluation") {
    Rng rng(8);
    const int nr = 4;
    const int n_uavs = 2, n_users = 2;
    std::vector<std::vector<ChannelRealization>> channels(n_uavs,
                                                          std::vector<ChannelRealization>(n_users));
    std::vector<std::vector<cvec>> beams(n_uavs, std::vector<cvec>(n_users));
    ChannelParams p = default_params();
    for (int n = 0; n < n_uavs; ++n)
        for (int k = 0; k < n_users; ++k) {
            channels[n][k] = sample_channel({rng.uniform(0, 100), rng.uniform(0, 100), 110},
                                            {rng.uniform(0, 100), rng.uniform(0, 100), 0}, 2, 2, p,
                                            rng);
            beams[n][k].resize(nr);
            for (auto& b : beams[n][k]) b = {rng.normal(), rng.normal()};
        }
    std::vector<std::vector<std::uint8_t>> assoc{{1, 0}, {0, 1}};
    double noise = p.noise_power;
    auto [sinr, rate] = sinr_and_rate(0, assoc, beams, channels, noise, p.bandwidth_hz);

    auto ip = [](const cvec& w, const cvec& h) {
        std::complex<double> a{0, 0};
        for (std::size_t i = 0; i < w.size(); ++i) a += std::conj(w[i]) * h[i];
        return std::norm(a);
    };
    double sig = ip(beams[0][0], channels[0][0].h);
    double interf = ip(beams[1][1], channels[1][0].h);  // the only other active stream
    CHECK(sinr == doctest::Approx(sig / (interf + noise)).epsilon(1e-12));
    CHECK(rate == doctest::Approx(p.bandwidth_hz * std::log2(1.0 + sinr)).epsilon(1e-12));

    std::vector<std::vector<std::uint8_t>> none{{0, 0}, {0, 0}};
    CHECK_THROWS_AS(sinr_and_rate(0, none, beams, channels, noise, 1e6), std::invalid_argument);
}
