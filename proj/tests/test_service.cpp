#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lawn/rng.hpp"
#include "lawn/service.hpp"

using namespace lawn;

namespace {

std::vector<UavState> make_states(int n, int capacity) {
    std::vector<UavState> s(n);
    for (int i = 0; i < n; ++i) {
        s[i].capacity = capacity;
        s[i].alive = true;
        s[i].position = {50.0 * i, 0.0, 120.0};
        s[i].residual_energy = 1000.0;
    }
    return s;
}

// direct re-check of the one-UAV-per-user and capacity constraints
void check_association_constraints(const AssociationMatrix& a,
                                   const std::vector<UavState>& states, bool expect_full) {
    for (int k = 0; k < a.n_users(); ++k) {
        int col = 0;
        for (int n = 0; n < a.n_uavs(); ++n) col += a.alpha[n][k];
        if (expect_full)
            CHECK(col == 1);
        else
            CHECK(col <= 1);
    }
    for (int n = 0; n < a.n_uavs(); ++n) {
        CHECK(a.load(n) <= states[n].capacity);
        if (!states[n].alive) CHECK(a.load(n) == 0);
    }
}

}  // namespace

TEST_CASE("satisfaction sigmoid anchors") {
    // midpoint: R = target - C/lambda
    double lam = 2e-6, target = 4e6, c = 8.0;
    CHECK(satisfaction_f(target - c / lam, target, lam, c) == doctest::Approx(0.5));
    // at the target the sigmoid sits at 1/(1+e^-8)
    CHECK(satisfaction_f(target, target, lam, c) == doctest::Approx(0.999664649870).epsilon(1e-9));
    // far below target with lambda*target >> C
    CHECK(satisfaction_f(0.0, 4e7, 2e-6, 8.0) < 1e-10);
    CHECK_THROWS_AS(satisfaction_f(1.0, 1.0, 1.0, 7.0), std::invalid_argument);
    CHECK_THROWS_AS(satisfaction_f(1.0, 1.0, 0.0, 8.0), std::invalid_argument);
}

TEST_CASE("satisfaction is strictly increasing in rate") {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        double r = 8e6 * i / 100;
        double f = satisfaction_f(r, 4e6, 2e-6, 8.0);
        CHECK(f > prev);
        CHECK(f > 0.0);
        CHECK(f < 1.0);
        prev = f;
    }
}

TEST_CASE("satisfaction indicator gates on association") {
    CHECK(satisfaction_s(0.9, false) == 0.0);
    CHECK(satisfaction_s(0.9, true) == doctest::Approx(0.9));
}

TEST_CASE("single live UAV takes everyone") {
    auto states = make_states(1, 10);
    std::vector<std::vector<double>> scores{{0.3, 0.1, 0.7}};
    auto a = repair_association(scores, states);
    for (int k = 0; k < 3; ++k) CHECK(a.alpha[0][k] == 1);
}

TEST_CASE("capacity spill sends the lower-scoring user elsewhere") {
    auto states = make_states(2, 1);
    // both prefer UAV 0; user 1 prefers it more strongly
    std::vector<std::vector<double>> scores{{0.6, 0.9}, {0.1, 0.2}};
    auto a = repair_association(scores, states);
    CHECK(a.alpha[0][1] == 1);
    CHECK(a.alpha[1][0] == 1);
}

TEST_CASE("repair satisfies the association constraints on random inputs") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + rng.uniform_int(4);
        int k = 1 + rng.uniform_int(12);
        int cap = 1 + rng.uniform_int(5);
        auto states = make_states(n, cap);
        int live_cap = 0;
        for (auto& s : states) {
            s.alive = rng.uniform() < 0.8;
            if (s.alive) live_cap += s.capacity;
        }
        std::vector<std::vector<double>> scores(n, std::vector<double>(k));
        for (auto& row : scores)
            for (auto& v : row) v = rng.uniform(-5.0, 5.0);
        auto a = repair_association(scores, states);
        check_association_constraints(a, states, live_cap >= k);
    }
}

TEST_CASE("failure handling leaves healthy associations alone") {
    auto states = make_states(2, 2);
    AssociationMatrix prev(2, 3);
    prev.alpha[0][0] = 1;
    prev.alpha[0][1] = 1;
    prev.alpha[1][2] = 1;
    std::vector<Vec2> pos{{0, 0}, {10, 0}, {50, 0}};
    auto a = handle_failures(prev, states, pos);
    CHECK(a.alpha[0][0] == 1);
    CHECK(a.alpha[0][1] == 1);
    CHECK(a.alpha[1][2] == 1);
}

TEST_CASE("users on a dead UAV move to the nearest live one within the slot") {
    auto states = make_states(3, 2);
    states[0].alive = false;
    AssociationMatrix prev(3, 2);
    prev.alpha[0][0] = 1;
    prev.alpha[0][1] = 1;
    std::vector<Vec2> pos{{40, 0}, {120, 0}};  // UAV 1 at x=50, UAV 2 at x=100
    auto a = handle_failures(prev, states, pos);
    CHECK(a.alpha[0][0] == 0);
    CHECK(a.alpha[0][1] == 0);
    CHECK(a.alpha[1][0] == 1);  // nearest to x=40
    CHECK(a.alpha[2][1] == 1);  // nearest to x=120
    check_association_constraints(a, states, true);
}

TEST_CASE("total outage when every UAV is dead") {
    auto states = make_states(2, 5);
    states[0].alive = false;
    states[1].alive = false;
    AssociationMatrix prev(2, 4);
    prev.alpha[0][0] = prev.alpha[1][1] = 1;
    auto a = handle_failures(prev, states, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    for (int n = 0; n < 2; ++n)
        for (int k = 0; k < 4; ++k) CHECK(a.alpha[n][k] == 0);
}

TEST_CASE("randomized repair and failure events keep the constraints") {
    Rng rng(22);
    const int n = 3, k = 8;
    auto states = make_states(n, 3);
    std::vector<Vec2> pos(k);
    for (auto& p : pos) p = {rng.uniform(0, 500), rng.uniform(0, 500)};
    std::vector<std::vector<double>> scores(n, std::vector<double>(k));
    for (auto& row : scores)
        for (auto& v : row) v = rng.uniform(0.0, 1.0);
    AssociationMatrix a = repair_association(scores, states);

    for (int step = 0; step < 2000; ++step) {
        // random life toggles (death only; alive is monotone per episode)
        for (auto& s : states)
            if (s.alive && rng.uniform() < 0.02) s.alive = false;
        if (rng.uniform() < 0.3) {
            for (auto& row : scores)
                for (auto& v : row) v = rng.uniform(0.0, 1.0);
            a = repair_association(scores, states);
        } else {
            a = handle_failures(a, states, pos);
        }
        int live_cap = 0;
        for (const auto& s : states)
            if (s.alive) live_cap += s.capacity;
        check_association_constraints(a, states, live_cap >= k);
        if (!std::any_of(states.begin(), states.end(), [](const UavState& s) { return s.alive; })) {
            for (auto& s : states) s.alive = true;  // fresh fleet, keep fuzzing
        }
    }
}
