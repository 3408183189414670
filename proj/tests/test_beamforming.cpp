#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "lawn/beamforming.hpp"
#include "lawn/rng.hpp"

using namespace lawn;

namespace {

cvec random_row(int nr, Rng& rng) {
    cvec v(nr);
    for (auto& e : v) e = {rng.normal(), rng.normal()};
    return v;
}

std::vector<cvec> random_channel(int k, int nr, Rng& rng) {
    std::vector<cvec> rows(k);
    for (auto& r : rows) r = random_row(nr, rng);
    return rows;
}

double zf_sum_rate(const std::vector<double>& p, const std::vector<double>& cost, double noise) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::log2(1.0 + p[i] / (noise * cost[i]));
    return s;
}

}  // namespace

TEST_CASE("identity channel gives identity basis") {
    std::vector<cvec> rows(3, cvec(3, {0.0, 0.0}));
    for (int i = 0; i < 3; ++i) rows[i][i] = {1.0, 0.0};
    ZfBasis b = zf_basis(rows);
    for (int i = 0; i < 3; ++i) {
        CHECK(b.cost[i] == doctest::Approx(1.0));
        for (int j = 0; j < 3; ++j) {
            std::complex<double> expect = i == j ? std::complex<double>{1, 0} : std::complex<double>{0, 0};
            CHECK(std::abs(b.pinv_cols[i][j] - expect) < 1e-12);
        }
    }
}

TEST_CASE("single-row basis is the matched direction") {
    Rng rng(4);
    cvec h = random_row(6, rng);
    double n2 = 0.0;
    for (auto v : h) n2 += std::norm(v);
    ZfBasis b = zf_basis({h});
    CHECK(b.cost[0] == doctest::Approx(1.0 / n2).epsilon(1e-12));
    for (int i = 0; i < 6; ++i) CHECK(std::abs(b.pinv_cols[0][i] - h[i] / n2) < 1e-12);
}

TEST_CASE("pseudo-inverse residual on random 3x8 channels") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto rows = random_channel(3, 8, rng);
        ZfBasis b = zf_basis(rows);
        // independent multiply: w_j^H h_i should be the identity
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                std::complex<double> acc{0, 0};
                for (int c = 0; c < 8; ++c) acc += std::conj(b.pinv_cols[j][c]) * rows[i][c];
                std::complex<double> expect =
                    i == j ? std::complex<double>{1, 0} : std::complex<double>{0, 0};
                CHECK(std::abs(acc - expect) < 1e-9);
            }
    }
}

TEST_CASE("water fill closed forms") {
    double mu = 0.0;
    auto p1 = water_fill({1.0}, 1.0, 10.0, 1e-6, mu);
    CHECK(p1[0] == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(mu == doctest::Approx(1.0 / 11.0).epsilon(1e-6));

    auto p2 = water_fill({1.0, 1.0}, 1.0, 10.0, 1e-6, mu);
    CHECK(p2[0] == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(p2[1] == doctest::Approx(5.0).epsilon(1e-6));

    auto p3 = water_fill({1.0, 2.0}, 1.0, 10.0, 1e-6, mu);
    CHECK(p3[0] == doctest::Approx(5.5).epsilon(1e-6));
    CHECK(p3[1] == doctest::Approx(4.5).epsilon(1e-6));
    CHECK(1.0 / mu == doctest::Approx(6.5).epsilon(1e-6));
}

TEST_CASE("water fill beats a brute-force grid search") {
    // 1-D oracle for K = 2: maximize log2(1+p) + log2(1+(P-p)/2)
    double mu = 0.0;
    auto p = water_fill({1.0, 2.0}, 1.0, 10.0, 1e-6, mu);
    double best = -1.0, best_p = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        double a = 10.0 * i / 100000;
        double v = std::log2(1.0 + a) + std::log2(1.0 + (10.0 - a) / 2.0);
        if (v > best) {
            best = v;
            best_p = a;
        }
    }
    CHECK(best_p == doctest::Approx(5.5).epsilon(1e-3));
    CHECK(zf_sum_rate(p, {1.0, 2.0}, 1.0) >= best - 1e-6);
}

TEST_CASE("complementary slackness and budget accuracy") {
    Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        int k = 2 + rng.uniform_int(4);
        std::vector<double> cost(k);
        for (auto& c : cost) c = std::pow(10.0, rng.uniform(-1.0, 4.0));
        double noise = 1e-3;
        double p_max = 1.0;
        double eps = 1e-6 * p_max;
        double mu = 0.0;
        WaterFillDiagnostics diag;
        auto p = water_fill(cost, noise, p_max, eps, mu, &diag);

        double sum = 0.0;
        for (double v : p) sum += v;
        CHECK(std::abs(sum - p_max) <= eps);

        for (int i = 0; i < k; ++i) {
            if (p[i] > 0.0)
                CHECK(1.0 / mu > noise * cost[i]);
            else
                CHECK(1.0 / mu <= noise * cost[i] + 1e-15);
        }

        // iteration count consistent with the log2(1/eps) bisection bound
        double slope = k / (diag.mu_lo0 * diag.mu_lo0);
        double bound = std::ceil(std::log2((diag.mu_hi0 - diag.mu_lo0) * slope / eps)) + 1;
        CHECK(diag.bisection_iterations <= bound);
    }
}

TEST_CASE("rates never decrease when the budget grows") {
    Rng rng(7);
    std::vector<double> cost{0.5, 1.5, 4.0};
    double noise = 0.1;
    double mu = 0.0;
    std::vector<double> prev(3, 0.0);
    for (double pm = 0.5; pm < 20.0; pm *= 2.0) {
        auto p = water_fill(cost, noise, pm, 1e-9 * pm, mu);
        for (int i = 0; i < 3; ++i) {
            CHECK(p[i] >= prev[i] - 1e-9);
            prev[i] = p[i];
        }
    }
}

TEST_CASE("assembled beams satisfy the construction identities") {
    Rng rng(8);
    auto rows = random_channel(3, 8, rng);
    ZfBasis basis = zf_basis(rows);
    double mu = 0.0;
    auto p = water_fill(basis.cost, 1e-3, 2.0, 1e-8, mu);
    BeamformingSolution sol = assemble_beams(basis, p, mu);

    double trace = 0.0;
    for (const auto& w : sol.beams)
        for (auto v : w) trace += std::norm(v);
    CHECK(trace == doctest::Approx(sol.sum_power).epsilon(1e-9));

    for (int k = 0; k < 3; ++k) {
        std::complex<double> a{0, 0};
        for (int c = 0; c < 8; ++c) a += std::conj(sol.beams[k][c]) * rows[k][c];
        CHECK(std::norm(a) == doctest::Approx(p[k] / basis.cost[k]).epsilon(1e-9));
    }
}

TEST_CASE("intra-UAV leakage is at zero-forcing level") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 2 + rng.uniform_int(3);
        int nr = 8;
        auto rows = random_channel(k, nr, rng);
        BeamformingSolution sol = solve_zf_waterfill(rows, 1e-3, 1.0);
        for (int a = 0; a < k; ++a) {
            if (sol.beams[a].empty()) continue;
            double wn = 0.0;
            for (auto v : sol.beams[a]) wn += std::norm(v);
            for (int b = 0; b < k; ++b) {
                if (a == b) continue;
                double hn = 0.0;
                std::complex<double> ip{0, 0};
                for (int c = 0; c < nr; ++c) {
                    hn += std::norm(rows[b][c]);
                    ip += std::conj(sol.beams[a][c]) * rows[b][c];
                }
                CHECK(std::abs(ip) / std::sqrt(wn * hn) < 1e-9);
            }
        }
    }
}

TEST_CASE("equal beamforming ignores CSI and splits power evenly") {
    BeamformingSolution one = equal_beamforming(1, 16, 2.0);
    double n2 = 0.0;
    for (auto v : one.beams[0]) n2 += std::norm(v);
    CHECK(n2 == doctest::Approx(2.0).epsilon(1e-12));

    BeamformingSolution four = equal_beamforming(4, 16, 1.0);
    double trace = 0.0;
    for (const auto& w : four.beams) {
        double wn = 0.0;
        for (auto v : w) wn += std::norm(v);
        CHECK(wn == doctest::Approx(0.25).epsilon(1e-12));
        trace += wn;
    }
    CHECK(trace == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rank-deficient channels fall back by dropping the weakest user") {
    Rng rng(10);
    cvec h = random_row(4, rng);
    cvec h_weak = h;
    for (auto& v : h_weak) v *= 0.1;  // colinear, weaker
    BeamformingSolution sol = solve_zf_waterfill({h, h_weak}, 1e-3, 1.0);
    REQUIRE(sol.dropped.size() == 1);
    CHECK(sol.dropped[0] == 1);
    CHECK(sol.powers[1] == 0.0);
    CHECK(sol.beams[1].empty());
    CHECK(sol.sum_power == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("printed-formula cost mode stays within budget and never wins") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto rows = random_channel(3, 8, rng);
        double noise = 1e-3;
        BeamformingSolution kkt = solve_zf_waterfill(rows, noise, 1.0, 1e-8, false);
        BeamformingSolution lit = solve_zf_waterfill(rows, noise, 1.0, 1e-8, true);
        CHECK(lit.sum_power <= 1.0 + 1e-6);
        ZfBasis basis = zf_basis(rows);
        double r_kkt = zf_sum_rate(kkt.powers, basis.cost, noise);
        double r_lit = zf_sum_rate(lit.powers, basis.cost, noise);
        CHECK(r_lit <= r_kkt + 1e-9);
    }
}

TEST_CASE("invalid inputs are rejected") {
    double mu;
    CHECK_THROWS_AS(water_fill({}, 1.0, 1.0, 1e-6, mu), std::invalid_argument);
    CHECK_THROWS_AS(water_fill({1.0}, -1.0, 1.0, 1e-6, mu), std::invalid_argument);
    CHECK_THROWS_AS(water_fill({0.0}, 1.0, 1.0, 1e-6, mu), std::invalid_argument);
    CHECK_THROWS_AS(zf_basis({}), std::invalid_argument);
}
