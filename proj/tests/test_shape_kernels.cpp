#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltp/errors.hpp"
#include "ltp/quadrature.hpp"
#include "ltp/shape_kernels.hpp"

using namespace ltp;

namespace {

// Independent composite Simpson on [a, b] with n (even) intervals.
template <typename F>
double simpson_rule(F f, double a, double b, int n) {
    const double dx = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * dx);
    return s * dx / 3.0;
}

}  // namespace

TEST_CASE("B3 spline takes its tabulated values") {
    const ShapeFunction phi(ShapeFamily::B3);
    CHECK(phi(0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(phi(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(phi(-1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(phi(2.0) == 0.0);
    CHECK(phi(0.5) == doctest::Approx(23.0 / 48.0).epsilon(1e-15));
    CHECK(phi.support_radius() == 2.0);
}

TEST_CASE("B1 hat takes its tabulated values") {
    const ShapeFunction phi(ShapeFamily::B1);
    CHECK(phi(0.0) == 1.0);
    CHECK(phi(0.25) == 0.75);
    CHECK(phi(-1.0) == 0.0);
    CHECK(phi.support_radius() == 1.0);
}

TEST_CASE("profile tables agree with the closed-form shapes") {
    for (ShapeFamily fam : {ShapeFamily::B1, ShapeFamily::B3}) {
        const ShapeFunction phi(fam);
        for (int i = 0; i <= 400; ++i) {
            const double z = -2.5 + 5.0 * i / 400.0;
            CHECK(phi.profile()(z) == doctest::Approx(phi(z)).epsilon(1e-14));
        }
    }
}

TEST_CASE("partition of unity and unit mass") {
    for (ShapeFamily fam : {ShapeFamily::B1, ShapeFamily::B3}) {
        const ShapeFunction phi(fam);
        for (int i = 0; i <= 997; ++i) {
            const double x = -4.0 + 8.0 * i / 997.0;
            double s = 0.0;
            for (int k = -8; k <= 8; ++k) s += phi(x - k);
            CHECK(std::abs(s - 1.0) < 1e-12);
            CHECK(phi(x) >= 0.0);
        }
        CHECK(std::abs(phi.profile().integral() - 1.0) < 1e-14);
        const double r = phi.support_radius();
        double numeric = 0.0;
        for (double a = -r; a < r; a += 1.0) numeric += simpson_rule([&](double z) { return phi(z); }, a, a + 1.0, 64);
        CHECK(std::abs(numeric - 1.0) < 1e-12);
    }
}

TEST_CASE("polynomial piece integrates exactly") {
    const PolynomialPiece p{0.0, 2.0, {1.0, -2.0, 0.0, 3.0}};  // 1 - 2z + 3z^3
    // Antiderivative z - z^2 + 3 z^4 / 4.
    auto F = [](double z) { return z - z * z + 0.75 * z * z * z * z; };
    CHECK(p.integral(0.5, 1.5) == doctest::Approx(F(1.5) - F(0.5)).epsilon(1e-15));
    CHECK(p(1.0) == 2.0);
}

TEST_CASE("hat autocorrelation is the cubic spline") {
    const ShapeFunction hat(ShapeFamily::B1);
    const ShapeFunction cubic(ShapeFamily::B3);
    for (double s : {0.0, 0.3, 1.0, 1.7, 2.0, 2.5}) {
        CHECK(std::abs(integrate_product(hat.profile(), hat.profile(), s) - cubic(s)) < 1e-14);
        CHECK(std::abs(integrate_product(hat.profile(), hat.profile(), -s) - cubic(s)) < 1e-14);
    }
}

TEST_CASE("B1 dual kernel is biorthogonal to integer shifts") {
    const ShapeFunction hat(ShapeFamily::B1);
    const DualKernel dual = hat.dual();
    CHECK(dual(0.0) == 1.5);
    CHECK(dual(0.75) == -0.5);
    CHECK(dual(1.0) == 0.0);
    for (int k = -3; k <= 3; ++k) {
        const double v = integrate_product(dual.profile(), hat.profile(), static_cast<double>(k));
        CHECK(std::abs(v - (k == 0 ? 1.0 : 0.0)) < 1e-14);
        double numeric = 0.0;
        for (double a = -1.0; a < 1.0; a += 0.5)
            numeric += integrate_adaptive([&](double z) { return dual(z) * hat(z - k); }, a, a + 0.5);
        CHECK(std::abs(numeric - (k == 0 ? 1.0 : 0.0)) < 1e-12);
    }
    CHECK(std::abs(dual.profile().integral() - 1.0) < 1e-15);
}

TEST_CASE("B3 has no dual kernel") {
    const ShapeFunction phi(ShapeFamily::B3);
    CHECK_FALSE(phi.dual_available());
    CHECK_THROWS_AS(phi.dual(), UnsupportedFeature);
}

TEST_CASE("tensor-product evaluation in two dimensions") {
    const ShapeFunction phi(ShapeFamily::B3);
    const std::vector<double> z{0.3, -1.2};
    CHECK(phi.eval(z) == doctest::Approx(phi(0.3) * phi(-1.2)).epsilon(1e-15));
    const DualKernel dual = ShapeFunction(ShapeFamily::B1).dual();
    CHECK(dual.eval(z) == 0.0);
}

TEST_CASE("shape family names") {
    CHECK(parse_shape_family("B1") == ShapeFamily::B1);
    CHECK(parse_shape_family("B3") == ShapeFamily::B3);
    CHECK(to_string(ShapeFamily::B3) == "B3");
    CHECK_THROWS_AS(parse_shape_family("B2"), ConfigError);
}

TEST_CASE("discontinuous piecewise polynomials are rejected") {
    CHECK_THROWS_AS(PiecewisePolynomial({{0.0, 1.0, {1.0}}, {1.5, 2.0, {1.0}}}), std::invalid_argument);
}
