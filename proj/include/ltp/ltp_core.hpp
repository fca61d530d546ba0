#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ltp/fields.hpp"
#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"
#include "ltp/quadrature.hpp"

namespace ltp {

enum class WeightMode { CellAverage, DualKernel };
enum class JacobianMode { Exponential, Linearized };

WeightMode parse_weight_mode(std::string_view name);
JacobianMode parse_jacobian_mode(std::string_view name);
std::string_view to_string(WeightMode mode);
std::string_view to_string(JacobianMode mode);

/// Places particles at x_k = k h on every grid cell whose weight-integration
/// support meets supp(rho0) and computes the weights, either as cell averages
/// of rho0 or against the B1 dual kernel.
ParticleState init_particles(const InitialDensity& rho0, double h, WeightMode mode, const ShapeFunction& shape,
                             int dim = 1);

struct StepSettings {
    double dt = 1e-3;
    JacobianMode jacobian = JacobianMode::Exponential;
    QuadratureRule rule{};
    double domain_radius = 4.0;
};

/// One explicit Euler LTP step:
///   x^{n+1} = x^n - dt (grad W * rho_h^n)(x^n)
///   J^n     = exp(-dt M) or I - dt M,  M = (D^2 W * rho_h^n)(x^n)
///   D^{n+1} = D^n (J^n)^-1,  h^{n+1} = det(J^n) h^n
/// Throws StepRejected for a non-positive linearized determinant and BlowUp
/// when a particle leaves the domain or a volume collapses below 1e-12 h^d.
ParticleState step(const ParticleState& state, const Potential& potential, const StepSettings& settings);

/// rho_h^n(x) = sum_k w_k / h_k phi(D_k (x - x_k) / h).
double reconstruct_density(const ParticleState& state, std::span<const double> x);
double reconstruct_density(const ParticleState& state, double x);

// 1D grid reconstruction, serial reference and OpenMP kernel.
std::vector<double> reconstruct_density_serial(const ParticleState& state, std::span<const double> xs);
std::vector<double> reconstruct_density_parallel(const ParticleState& state, std::span<const double> xs);

/// Values at sorted particle positions with piecewise-linear interpolation
/// in between (constant extension outside the particle range).
struct SampledField {
    std::vector<double> x;
    std::vector<double> values;

    double operator()(double at) const;
    double max_abs() const;
};

/// u_h^n(x_k^n) = -(grad W * rho_h^n)(x_k^n), 1D.
SampledField reconstruct_velocity_field(const ParticleState& state, const Potential& potential,
                                        const QuadratureRule& rule = {});
/// h^n(x_k^n) = h prod_{m<n} j_k^m, 1D.
SampledField reconstruct_size_field(const ParticleState& state);

struct Diagnostics {
    double total_mass = 0.0;
    std::vector<double> centroid;
    double min_j = 1.0;
    double max_j = 1.0;
    double min_volume = 0.0;
    std::size_t max_overlap = 0;  // kappa_n, 1D only (0 in d > 1)
};

Diagnostics diagnostics(const ParticleState& state);

/// Largest number of particle supports sharing a point (open intervals, 1D).
std::size_t max_overlap(const ParticleState& state);

/// Smallest interval containing every particle support (1D).
std::pair<double, double> support_bounds(const ParticleState& state);

}  // namespace ltp
