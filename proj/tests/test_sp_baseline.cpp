#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltp/errors.hpp"
#include "ltp/ltp_core.hpp"
#include "ltp/quadrature.hpp"
#include "ltp/sp_baseline.hpp"

using namespace ltp;

namespace {

ParticleState initial(double h) {
    return init_particles(InitialDensity::rho1(), h, WeightMode::CellAverage, ShapeFunction(ShapeFamily::B3));
}

}  // namespace

TEST_CASE("with eps = h the initial reconstructions coincide") {
    const ParticleState s = initial(0.02);
    const SPState sp = SPState::from_ltp(s, 0.02);
    std::vector<double> xs;
    for (int i = 0; i <= 300; ++i) xs.push_back(-1.1 + 2.2 * i / 300.0);
    const auto a = sp_reconstruct_grid(sp, xs);
    const auto b = reconstruct_density_parallel(s, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("fixed-radius reconstruction carries unit mass") {
    const SPState sp = SPState::from_ltp(initial(0.02), 0.05);
    double m = 0.0;
    for (double a = -1.2; a < 1.2; a += 0.01)
        m += integrate_adaptive([&](double x) { return sp_reconstruct(sp, x); }, a, a + 0.01);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quadratic SP step contracts toward the centroid") {
    const SPState sp = SPState::from_ltp(initial(0.05), 0.1);
    double lambda = 0.0;
    for (std::size_t k = 0; k < sp.size(); ++k) lambda += sp.weights[k] * sp.positions[k];
    const SPState n = sp_step(sp, Potential::quadratic(), 0.01);
    for (std::size_t k = 0; k < sp.size(); ++k)
        CHECK(std::abs(n.positions[k] - (sp.positions[k] - 0.02 * (sp.positions[k] - lambda))) < 1e-13);
    CHECK(n.step == 1);
    CHECK(n.eps == 0.1);
}

TEST_CASE("invalid SP settings") {
    CHECK_THROWS_AS(SPState::from_ltp(initial(0.05), 0.0), ConfigError);
    const SPState sp = SPState::from_ltp(initial(0.05), 0.1);
    CHECK_THROWS_AS(sp_step(sp, Potential::quadratic(), -1.0), ConfigError);
    CHECK_THROWS_AS(sp_step(sp, Potential::quadratic(), 0.01, {}, 0.2), BlowUp);
}
