// Wall-clock comparison of the OpenMP kernels against their serial
// references: batched linear algebra, per-link channel synthesis, and the
// per-UAV ZF water-filling solves. Results also double as a determinism
// spot-check (max |diff| must print as 0).

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "lawn/beamforming.hpp"
#include "lawn/channel.hpp"
#include "lawn/mat.hpp"
#include "lawn/rng.hpp"

using namespace lawn;
using Clock = std::chrono::high_resolution_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench_gemm(int m, int k, int n, int reps) {
    Rng rng(1);
    mat::Mat a(m, k), b(k, n), c1(m, n), c2(m, n);
    for (auto& v : a.d) v = rng.uniform(-1, 1);
    for (auto& v : b.d) v = rng.uniform(-1, 1);

    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) mat::detail::gemm_serial(a, b, c1);
    double serial = ms_since(t0);

    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) mat::gemm(a, b, c2);
    double parallel = ms_since(t0);

    double diff = 0.0;
    for (std::size_t i = 0; i < c1.d.size(); ++i) diff = std::max(diff, std::abs(c1.d[i] - c2.d[i]));
    std::printf("gemm %4dx%4dx%4d  serial %8.2f ms  omp %8.2f ms  speedup %5.2fx  maxdiff %g\n", m,
                k, n, serial, parallel, serial / parallel, diff);
}

void bench_channels(int n_uavs, int n_users, int nr_side, int reps) {
    ChannelParams params;
    const int links = n_uavs * n_users;

    auto run = [&](bool parallel) {
        double sink = 0.0;
        auto t0 = Clock::now();
        for (int r = 0; r < reps; ++r) {
#pragma omp parallel for schedule(static) reduction(+ : sink) if (parallel)
            for (int link = 0; link < links; ++link) {
                Rng rng = derive_rng(9, r, link);
                ChannelRealization c = sample_channel(
                    {250.0 + link % 7, 250.0, 120.0}, {5.0 * (link % 50), 40.0, 0.0}, nr_side,
                    nr_side, params, rng);
                sink += std::norm(c.h[0]);
            }
        }
        return std::pair{ms_since(t0), sink};
    };

    auto [serial, s1] = run(false);
    auto [parallel, s2] = run(true);
    std::printf("channels %2dx%2d (N_r=%2d) serial %8.2f ms  omp %8.2f ms  speedup %5.2fx  maxdiff %g\n",
                n_uavs, n_users, nr_side * nr_side, serial, parallel, serial / parallel,
                std::abs(s1 - s2));
}

void bench_zf(int n_uavs, int k_users, int nr, int reps) {
    std::vector<std::vector<cvec>> instances(n_uavs, std::vector<cvec>(k_users, cvec(nr)));
    Rng rng(33);
    for (auto& inst : instances)
        for (auto& row : inst)
            for (auto& v : row) v = {rng.normal(), rng.normal()};

    auto run = [&](bool parallel) {
        double sink = 0.0;
        auto t0 = Clock::now();
        for (int r = 0; r < reps; ++r) {
#pragma omp parallel for schedule(dynamic) reduction(+ : sink) if (parallel)
            for (int n = 0; n < n_uavs; ++n) {
                BeamformingSolution sol = solve_zf_waterfill(instances[n], 1e-3, 1.0);
                sink += sol.sum_power;
            }
        }
        return std::pair{ms_since(t0), sink};
    };

    auto [serial, s1] = run(false);
    auto [parallel, s2] = run(true);
    std::printf("zf-waterfill N=%d K'=%2d N_r=%2d serial %8.2f ms  omp %8.2f ms  speedup %5.2fx  maxdiff %g\n",
                n_uavs, k_users, nr, serial, parallel, serial / parallel, std::abs(s1 - s2));
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", omp_get_max_threads());
    bench_gemm(256, 174, 256, 50);
    bench_gemm(256, 256, 128, 50);
    bench_gemm(512, 128, 99, 50);
    bench_channels(3, 30, 4, 200);
    bench_zf(3, 10, 16, 200);
    return 0;
}
