#pragma once

#include <span>
#include <vector>

#include "ltp/fields.hpp"
#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"
#include "ltp/quadrature.hpp"

namespace ltp {

/// Classical smooth-particle state: every particle keeps the fixed radius eps.
struct SPState {
    double eps = 0.0;
    std::size_t step = 0;
    double time = 0.0;
    ShapeFunction shape{ShapeFamily::B3};
    std::vector<double> positions;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }

    /// Same particles and weights as an initial LTP state, radius eps.
    static SPState from_ltp(const ParticleState& initial, double eps);
};

/// rho_eps(x) = sum_k w_k / eps phi((x - x_k) / eps).
double sp_reconstruct(const SPState& state, double x);
std::vector<double> sp_reconstruct_grid(const SPState& state, std::span<const double> xs);

/// x^{n+1} = x^n - dt (grad W * rho_eps^n)(x^n), with the LTP field machinery.
SPState sp_step(const SPState& state, const Potential& potential, double dt, const QuadratureRule& rule = {},
                double domain_radius = 4.0);

}  // namespace ltp
