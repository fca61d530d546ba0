#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltp/errors.hpp"
#include "ltp/potentials.hpp"

using namespace ltp;

namespace {

double central(const Potential& W, double x, double step) {
    return (W.value(std::abs(x + step)) - W.value(std::abs(x - step))) / (2.0 * step);
}

std::vector<Potential> family() {
    return {Potential::quadratic(), Potential::power_attractive(1.5), Potential::power_attractive(2.5),
            Potential::power_rep_attr(3.0, 1.5), Potential::power_rep_attr(3.0, 2.5), Potential::power_rep_attr(4.0, 2.5),
            Potential::power_rep_attr(3.0, 1.1)};
}

}  // namespace

TEST_CASE("values of the three potential kinds") {
    CHECK(Potential::quadratic().value(1.5) == doctest::Approx(2.25));
    CHECK(Potential::power_attractive(3.0).value(2.0) == doctest::Approx(8.0 / 3.0));
    CHECK(Potential::power_rep_attr(3.0, 1.5).value(1.0) == doctest::Approx(1.0 / 3.0 - 1.0 / 1.5));
}

TEST_CASE("1D derivatives match finite differences") {
    for (const auto& W : family()) {
        for (double x : {-1.3, -0.4, 0.05, 0.7, 1.9}) {
            CHECK(W.grad_1d(x) == doctest::Approx(central(W, x, 1e-5)).epsilon(1e-7));
            const double fd = (W.grad_1d(x + 1e-5) - W.grad_1d(x - 1e-5)) / 2e-5;
            CHECK(W.hess_1d(x) == doctest::Approx(fd).epsilon(1e-6));
            double g = 0.0;
            double h = 0.0;
            W.grad_hess_1d(x, g, h);
            CHECK(g == doctest::Approx(W.grad_1d(x)).epsilon(1e-14));
            CHECK(h == doctest::Approx(W.hess_1d(x)).epsilon(1e-14));
        }
    }
}

TEST_CASE("2D gradient and hessian match finite differences") {
    for (const auto& base : {Potential::quadratic(2), Potential::power_rep_attr(3.0, 1.5, 2),
                             Potential::power_attractive(2.5, 2)}) {
        const std::vector<double> x{0.4, -0.7};
        std::vector<double> g(2), H(4);
        base.grad(x, g);
        base.hess(x, H);
        const double s = 1e-5;
        for (int i = 0; i < 2; ++i) {
            std::vector<double> xp = x, xm = x;
            xp[i] += s;
            xm[i] -= s;
            const double fd = (base.value(std::hypot(xp[0], xp[1])) - base.value(std::hypot(xm[0], xm[1]))) / (2 * s);
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-7));
            std::vector<double> gp(2), gm(2);
            base.grad(xp, gp);
            base.grad(xm, gm);
            for (int j = 0; j < 2; ++j) CHECK(H[j * 2 + i] == doctest::Approx((gp[j] - gm[j]) / (2 * s)).epsilon(1e-6));
        }
        CHECK(base.lap(x) == doctest::Approx(H[0] + H[3]).epsilon(1e-14));
    }
}

TEST_CASE("quadratic hessian at the origin") {
    const Potential W = Potential::quadratic(2);
    std::vector<double> H(4);
    W.hess(std::vector<double>{0.0, 0.0}, H);
    CHECK(H == std::vector<double>{2.0, 0.0, 0.0, 2.0});
    CHECK(Potential::quadratic().hess_1d(0.0) == 2.0);
}

TEST_CASE("classification of singular potentials") {
    CHECK_FALSE(Potential::quadratic().classify().singular);
    CHECK_FALSE(Potential::power_rep_attr(4.0, 2.5).classify().singular);
    const auto c = Potential::power_attractive(1.5).classify();
    CHECK(c.singular);
    CHECK(c.alpha == doctest::Approx(-0.5));
    CHECK(Potential::power_rep_attr(3.0, 1.1).classify().alpha == doctest::Approx(-0.1));
    // alpha = 0.5 >= d - 1 = 0 in 1D.
    CHECK_THROWS_AS(Potential::power_attractive(0.5).classify(), UnsupportedPotential);
    CHECK_NOTHROW(Potential::power_attractive(0.5, 2).classify());
}

TEST_CASE("singularities at the origin") {
    const Potential W = Potential::power_rep_attr(3.0, 1.5);
    CHECK(W.hessian_singular());
    CHECK_FALSE(W.gradient_singular());
    CHECK(W.grad_1d(0.0) == 0.0);
    CHECK_THROWS_AS(W.hess_1d(0.0), SingularityError);
    CHECK(Potential::power_rep_attr(4.0, 2.5).hess_1d(0.0) == 0.0);
}

TEST_CASE("singular bound constant dominates the hessian") {
    const Potential W = Potential::power_rep_attr(3.0, 1.5);
    const double L = W.singular_constant(2.0);
    const double alpha = W.classify().alpha;
    for (double x : {1e-6, 1e-3, 0.1, 0.9, 2.0}) CHECK(std::abs(W.hess_1d(x)) <= L * std::pow(x, -(1.0 + alpha)) + 1e-12);
}

TEST_CASE("polynomial kernels") {
    CHECK(Potential::quadratic().polynomial_kernel());
    CHECK(Potential::power_attractive(4.0).polynomial_kernel());
    CHECK_FALSE(Potential::power_attractive(3.0).polynomial_kernel());
    CHECK_FALSE(Potential::power_rep_attr(4.0, 2.5).polynomial_kernel());
}

TEST_CASE("fast powers agree with std::pow") {
    for (double e : {-2.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.7}) {
        const FastPow p(e);
        for (double r : {0.01, 0.3, 1.0, 2.7}) CHECK(p(r) == doctest::Approx(std::pow(r, e)).epsilon(1e-14));
    }
}

TEST_CASE("invalid potential parameters") {
    CHECK_THROWS_AS(Potential::power_rep_attr(2.0, 2.5), UnsupportedPotential);
    CHECK_THROWS_AS(Potential::power_rep_attr(3.0, 1.0), UnsupportedPotential);
    CHECK_THROWS_AS(Potential::power_attractive(-1.0), UnsupportedPotential);
    CHECK_THROWS_AS(parse_potential_kind("coulomb"), ConfigError);
    CHECK(parse_potential_kind("repattr") == PotentialKind::PowerRepAttr);
}
