#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ltp/config.hpp"
#include "ltp/metrics.hpp"
#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"

namespace ltp {

/// Closed-form solution for W(x) = x^2 in 1D. The center of mass lambda is
/// conserved and characteristics contract toward it at rate e^{-2t}:
///   rho(t, x) = rho0((x - lambda) e^{2t} + lambda) e^{2t}.
class QuadraticOracle {
public:
    explicit QuadraticOracle(InitialDensity rho0);

    /// Center of mass of rho0, by adaptive quadrature (not from particle weights).
    double lambda() const { return lambda_; }
    const InitialDensity& initial() const { return rho0_; }

    double density(double t, double x) const;
    std::vector<double> density(double t, std::span<const double> xs) const;
    /// F^{s,t}(x) = lambda + (x - lambda) e^{-2(t-s)}.
    double flow(double s, double t, double x) const;
    /// J^{s,t} = j^{s,t} = e^{-2(t-s)}.
    double jacobian(double s, double t) const;
    std::pair<double, double> support(double t) const;

private:
    InitialDensity rho0_;
    double lambda_;
};

/// Point particles X_i with masses m_i (positions laid out N*d).
struct NBodyState {
    int dim = 1;
    double time = 0.0;
    std::size_t step = 0;
    std::vector<double> positions;
    std::vector<double> masses;

    std::size_t size() const { return masses.size(); }
    std::vector<double> centroid() const;
};

enum class NBodyScheme { Euler, RK4 };

/// Integrates dX_i/dt = -sum_{j != i} m_j grad W(X_i - X_j).
/// Throws CollisionError when two particles come within 1e-12 under a
/// singular potential.
NBodyState nbody_integrate(const NBodyState& state, const Potential& potential, double dt, std::size_t steps,
                           NBodyScheme scheme);

/// Densities sampled on a fixed grid at the configured snapshot times.
struct DensityTrajectory {
    EvaluationGrid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> profiles;
    ParticleState final_state;
    bool stopped_early = false;
};

/// Grid over the initial support with a margin of the particle reach.
EvaluationGrid default_grid(const SimulationConfig& config);

/// LTP run at (h / r, dt / r^2), used as surrogate truth where no closed
/// form exists. r = 1 returns the base run.
DensityTrajectory reference_run(const SimulationConfig& config, std::size_t refinement,
                                std::optional<EvaluationGrid> grid = std::nullopt);

}  // namespace ltp
