#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltp/linalg.hpp"

using namespace ltp;

namespace {

// Truncated Taylor series with many terms, independent of the Pade code.
std::vector<double> exp_series(const std::vector<double>& a, int d) {
    std::vector<double> out(d * d, 0.0), term(d * d, 0.0), next(d * d);
    for (int i = 0; i < d; ++i) out[i * d + i] = term[i * d + i] = 1.0;
    for (int k = 1; k < 60; ++k) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int m = 0; m < d; ++m) s += term[i * d + m] * a[m * d + j];
                next[i * d + j] = s / k;
            }
        term = next;
        for (int i = 0; i < d * d; ++i) out[i] += term[i];
    }
    return out;
}

}  // namespace

TEST_CASE("determinant, trace and inverse") {
    const std::vector<double> a{2.0, 1.0, 0.5, 3.0};
    CHECK(linalg::det(a, 2) == doctest::Approx(5.5));
    CHECK(linalg::trace(a, 2) == 5.0);
    std::vector<double> inv(4), prod(4), eye(4);
    linalg::inverse(a, 2, inv);
    linalg::multiply(a, inv, 2, prod);
    linalg::identity(2, eye);
    for (int i = 0; i < 4; ++i) CHECK(prod[i] == doctest::Approx(eye[i]).epsilon(1e-15));
    CHECK(linalg::det(std::vector<double>{-0.25}, 1) == -0.25);
}

TEST_CASE("matrix exponential matches the Taylor series") {
    const std::vector<std::vector<double>> cases{
        {0.3, -0.2, 0.1, -0.4},
        {-0.02, 0.001, 0.003, -0.015},
        {1.5, 2.0, -1.0, 0.5},
        {0.1, 0.2, 0.0, 0.0, -0.3, 0.4, 0.5, 0.0, 0.2},
    };
    for (const auto& a : cases) {
        const int d = a.size() == 4 ? 2 : 3;
        std::vector<double> e(d * d);
        linalg::expm(a, d, e);
        const auto ref = exp_series(a, d);
        for (int i = 0; i < d * d; ++i) CHECK(e[i] == doctest::Approx(ref[i]).epsilon(1e-13));
    }
}

TEST_CASE("matrix exponential special cases") {
    std::vector<double> e(4);
    linalg::expm(std::vector<double>{0.0, 1.0, 0.0, 0.0}, 2, e);
    CHECK(e == std::vector<double>{1.0, 1.0, 0.0, 1.0});
    linalg::expm(std::vector<double>{-0.7, 0.0, 0.0, 2.0}, 2, e);
    CHECK(e[0] == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
    CHECK(e[3] == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
    std::vector<double> one(1);
    linalg::expm(std::vector<double>{-3.0}, 1, one);
    CHECK(one[0] == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
}

TEST_CASE("det of exp equals exp of trace") {
    const std::vector<double> a{0.2, -0.5, 0.3, -0.1, 0.4, 0.0, 0.05, 0.1, -0.6};
    std::vector<double> e(9);
    linalg::expm(a, 3, e);
    CHECK(linalg::det(e, 3) == doctest::Approx(std::exp(linalg::trace(a, 3))).epsilon(1e-14));
}
