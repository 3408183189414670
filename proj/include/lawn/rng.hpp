#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace lawn {

// splitmix64 step; also used to fold tags into stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic counter-based generator. Streams derived from the same root
// seed with distinct tags are independent, so per-(episode, slot, link)
// sampling can run in any order or thread count and still reproduce bit-exact.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds (0, 1, 2, ...)
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n), Lemire multiply-shift
    int uniform_int(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    // standard normal, Box-Muller pair cache
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly-symmetric complex normal, E|z|^2 = 1
    std::complex<double> cnormal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-std::log(u1));
        double a = 2.0 * M_PI * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    // checkpointable state
    struct State {
        std::uint64_t counter = 0;
        double spare = 0.0;
        bool have_spare = false;
    };
    State state() const { return {state_, spare_, have_spare_}; }
    void set_state(const State& s) {
        state_ = s.counter;
        spare_ = s.spare;
        have_spare_ = s.have_spare;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derive an independent stream seed from a root seed and up to three tags.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t t0,
                                 std::uint64_t t1 = 0, std::uint64_t t2 = 0) {
    std::uint64_t s = root;
    splitmix64(s);
    s ^= t0;
    splitmix64(s);
    s ^= t1;
    splitmix64(s);
    s ^= t2;
    return splitmix64(s);
}

inline Rng derive_rng(std::uint64_t root, std::uint64_t t0, std::uint64_t t1 = 0,
                      std::uint64_t t2 = 0) {
    return Rng(derive_seed(root, t0, t1, t2));
}

}  // namespace lawn
