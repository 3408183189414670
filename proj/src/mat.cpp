#include "lawn/mat.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lawn::mat {

namespace {

void check(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// row r of C = A * B, accumulated in k-major order so the sum order is fixed
inline void gemm_row(const Mat& a, const Mat& b, Mat& c, int r) {
    double* crow = c.row(r);
    for (int j = 0; j < c.cols; ++j) crow[j] = 0.0;
    const double* arow = a.row(r);
    for (int k = 0; k < a.cols; ++k) {
        const double aik = arow[k];
        const double* brow = b.row(k);
        for (int j = 0; j < c.cols; ++j) crow[j] += aik * brow[j];
    }
}

inline void gemm_nt_row(const Mat& a, const Mat& b, Mat& c, int r) {
    const double* arow = a.row(r);
    double* crow = c.row(r);
    for (int j = 0; j < c.cols; ++j) {
        const double* brow = b.row(j);
        double acc = 0.0;
        for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
        crow[j] = acc;
    }
}

inline void gemm_tn_row(const Mat& a, const Mat& b, Mat& c, int r) {
    // row r of C = (A^T B), i.e. column r of A dotted with columns of B
    double* crow = c.row(r);
    for (int j = 0; j < c.cols; ++j) {
        double acc = 0.0;
        for (int k = 0; k < a.rows; ++k) acc += a(k, r) * b(k, j);
        crow[j] = acc;
    }
}

}  // namespace

void gemm(const Mat& a, const Mat& b, Mat& c) {
    check(a.cols == b.rows, "gemm: inner dimensions differ");
    check(c.rows == a.rows && c.cols == b.cols, "gemm: output shape");
#pragma omp parallel for schedule(static) if (a.rows > 1)
    for (int r = 0; r < a.rows; ++r) gemm_row(a, b, c, r);
}

void gemm_nt(const Mat& a, const Mat& b, Mat& c) {
    check(a.cols == b.cols, "gemm_nt: inner dimensions differ");
    check(c.rows == a.rows && c.cols == b.rows, "gemm_nt: output shape");
#pragma omp parallel for schedule(static) if (a.rows > 1)
    for (int r = 0; r < a.rows; ++r) gemm_nt_row(a, b, c, r);
}

void gemm_tn(const Mat& a, const Mat& b, Mat& c) {
    check(a.rows == b.rows, "gemm_tn: inner dimensions differ");
    check(c.rows == a.cols && c.cols == b.cols, "gemm_tn: output shape");
#pragma omp parallel for schedule(static) if (a.cols > 1)
    for (int r = 0; r < a.cols; ++r) gemm_tn_row(a, b, c, r);
}

void add_row_bias(Mat& y, const std::vector<double>& bias) {
    check(static_cast<int>(bias.size()) == y.cols, "add_row_bias: size");
#pragma omp parallel for schedule(static) if (y.rows > 1)
    for (int r = 0; r < y.rows; ++r) {
        double* row = y.row(r);
        for (int c = 0; c < y.cols; ++c) row[c] += bias[c];
    }
}

void col_sum(const Mat& y, std::vector<double>& out) {
    out.assign(y.cols, 0.0);
#pragma omp parallel for schedule(static) if (y.cols > 1)
    for (int c = 0; c < y.cols; ++c) {
        double acc = 0.0;
        for (int r = 0; r < y.rows; ++r) acc += y(r, c);
        out[c] = acc;
    }
}

void tanh_inplace(Mat& y) {
#pragma omp parallel for schedule(static) if (y.rows > 1)
    for (int r = 0; r < y.rows; ++r) {
        double* row = y.row(r);
        for (int c = 0; c < y.cols; ++c) row[c] = std::tanh(row[c]);
    }
}

void tanh_backward(const Mat& act, const Mat& dpost, Mat& dpre) {
    check(act.rows == dpost.rows && act.cols == dpost.cols, "tanh_backward: shape");
    check(dpre.rows == act.rows && dpre.cols == act.cols, "tanh_backward: out shape");
#pragma omp parallel for schedule(static) if (act.rows > 1)
    for (int r = 0; r < act.rows; ++r) {
        const double* arow = act.row(r);
        const double* drow = dpost.row(r);
        double* orow = dpre.row(r);
        for (int c = 0; c < act.cols; ++c) orow[c] = drow[c] * (1.0 - arow[c] * arow[c]);
    }
}

namespace detail {

void gemm_serial(const Mat& a, const Mat& b, Mat& c) {
    check(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols, "gemm_serial: shape");
    for (int r = 0; r < a.rows; ++r) gemm_row(a, b, c, r);
}

void gemm_nt_serial(const Mat& a, const Mat& b, Mat& c) {
    check(a.cols == b.cols && c.rows == a.rows && c.cols == b.rows, "gemm_nt_serial: shape");
    for (int r = 0; r < a.rows; ++r) gemm_nt_row(a, b, c, r);
}

void gemm_tn_serial(const Mat& a, const Mat& b, Mat& c) {
    check(a.rows == b.rows && c.rows == a.cols && c.cols == b.cols, "gemm_tn_serial: shape");
    for (int r = 0; r < a.cols; ++r) gemm_tn_row(a, b, c, r);
}

void tanh_inplace_serial(Mat& y) {
    for (auto& v : y.d) v = std::tanh(v);
}

void tanh_backward_serial(const Mat& act, const Mat& dpost, Mat& dpre) {
    for (std::size_t i = 0; i < act.d.size(); ++i)
        dpre.d[i] = dpost.d[i] * (1.0 - act.d[i] * act.d[i]);
}

}  // namespace detail

}  // namespace lawn::mat
