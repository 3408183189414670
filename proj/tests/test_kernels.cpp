#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lawn/mat.hpp"
#include "lawn/rng.hpp"

using lawn::Rng;
using namespace lawn::mat;

namespace {

Mat random_mat(int r, int c, Rng& rng) {
    Mat m(r, c);
    for (auto& v : m.d) v = rng.uniform(-1.0, 1.0);
    return m;
}

// transparently indexed triple loop, no accumulation-order tricks
Mat naive_mm(const Mat& a, const Mat& b) {
    Mat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

}  // namespace

TEST_CASE("gemm matches a naive oracle") {
    Rng rng(7);
    Mat a = random_mat(17, 31, rng);
    Mat b = random_mat(31, 13, rng);
    Mat c(17, 13);
    gemm(a, b, c);
    Mat ref = naive_mm(a, b);
    for (std::size_t i = 0; i < c.d.size(); ++i) CHECK(c.d[i] == doctest::Approx(ref.d[i]).epsilon(1e-12));
}

TEST_CASE("parallel kernels are bit-identical to the serial references") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        int m = 3 + rng.uniform_int(40);
        int k = 3 + rng.uniform_int(40);
        int n = 3 + rng.uniform_int(40);
        Mat a = random_mat(m, k, rng);
        Mat b = random_mat(k, n, rng);
        Mat c1(m, n), c2(m, n);
        gemm(a, b, c1);
        detail::gemm_serial(a, b, c2);
        CHECK(c1.d == c2.d);

        Mat bt = random_mat(n, k, rng);
        Mat d1(m, n), d2(m, n);
        gemm_nt(a, bt, d1);
        detail::gemm_nt_serial(a, bt, d2);
        CHECK(d1.d == d2.d);

        Mat at = random_mat(k, m, rng);
        Mat e1(m, n), e2(m, n);
        gemm_tn(at, b, e1);
        detail::gemm_tn_serial(at, b, e2);
        CHECK(e1.d == e2.d);

        Mat t1 = random_mat(m, n, rng);
        Mat t2 = t1;
        tanh_inplace(t1);
        detail::tanh_inplace_serial(t2);
        CHECK(t1.d == t2.d);

        Mat g1(m, n), g2(m, n);
        Mat dpost = random_mat(m, n, rng);
        tanh_backward(t1, dpost, g1);
        detail::tanh_backward_serial(t1, dpost, g2);
        CHECK(g1.d == g2.d);
    }
}

TEST_CASE("gemm_nt and gemm_tn agree with explicit transposes") {
    Rng rng(3);
    Mat a = random_mat(9, 14, rng);
    Mat b = random_mat(6, 14, rng);
    Mat c(9, 6);
    gemm_nt(a, b, c);
    Mat bt(14, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 14; ++j) bt(j, i) = b(i, j);
    Mat ref = naive_mm(a, bt);
    for (std::size_t i = 0; i < c.d.size(); ++i) CHECK(c.d[i] == doctest::Approx(ref.d[i]));

    Mat at = random_mat(14, 9, rng);
    Mat d(9, 6);
    Mat b2 = random_mat(14, 6, rng);
    gemm_tn(at, b2, d);
    Mat att(9, 14);
    for (int i = 0; i < 14; ++i)
        for (int j = 0; j < 9; ++j) att(j, i) = at(i, j);
    Mat ref2 = naive_mm(att, b2);
    for (std::size_t i = 0; i < d.d.size(); ++i) CHECK(d.d[i] == doctest::Approx(ref2.d[i]));
}

TEST_CASE("bias add and column sum") {
    Mat y(3, 2);
    y(0, 0) = 1;
    y(1, 0) = 2;
    y(2, 0) = 3;
    y(0, 1) = -1;
    y(1, 1) = 0;
    y(2, 1) = 1;
    add_row_bias(y, {10.0, 20.0});
    CHECK(y(0, 0) == 11);
    CHECK(y(2, 1) == 21);
    std::vector<double> s;
    col_sum(y, s);
    CHECK(s[0] == doctest::Approx(36.0));
    CHECK(s[1] == doctest::Approx(60.0));
}

TEST_CASE("repeated calls are deterministic") {
    Rng rng(42);
    Mat a = random_mat(33, 29, rng);
    Mat b = random_mat(29, 21, rng);
    Mat c1(33, 21), c2(33, 21);
    gemm(a, b, c1);
    gemm(a, b, c2);
    CHECK(c1.d == c2.d);
}
