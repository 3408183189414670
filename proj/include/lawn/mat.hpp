#pragma once

#include <cstddef>
#include <vector>

namespace lawn::mat {

// Dense row-major matrix of doubles. Sized for MLP workloads (hundreds of
// rows/cols), not for general sparse/huge problems.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> d;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return d[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return d[static_cast<std::size_t>(r) * cols + c]; }

    double* row(int r) { return d.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return d.data() + static_cast<std::size_t>(r) * cols; }

    void set_zero() { d.assign(d.size(), 0.0); }
    std::size_t size() const { return d.size(); }
};

// Every kernel below has two implementations: an OpenMP one (the default
// entry point) and a serial reference used by the tests and the benchmark.
// Each output element is produced by exactly one thread with a fixed inner
// summation order, so OpenMP results are bit-identical to the serial ones
// for any thread count.

// C = A * B
void gemm(const Mat& a, const Mat& b, Mat& c);
// C = A * B^T
void gemm_nt(const Mat& a, const Mat& b, Mat& c);
// C = A^T * B
void gemm_tn(const Mat& a, const Mat& b, Mat& c);

// y[r][c] += bias[c]
void add_row_bias(Mat& y, const std::vector<double>& bias);
// out[c] = sum_r y[r][c]
void col_sum(const Mat& y, std::vector<double>& out);

void tanh_inplace(Mat& y);
// dpre[r][c] = dpost[r][c] * (1 - act[r][c]^2), act = tanh(pre)
void tanh_backward(const Mat& act, const Mat& dpost, Mat& dpre);

namespace detail {
void gemm_serial(const Mat& a, const Mat& b, Mat& c);
void gemm_nt_serial(const Mat& a, const Mat& b, Mat& c);
void gemm_tn_serial(const Mat& a, const Mat& b, Mat& c);
void tanh_inplace_serial(Mat& y);
void tanh_backward_serial(const Mat& act, const Mat& dpost, Mat& dpre);
}  // namespace detail

}  // namespace lawn::mat
