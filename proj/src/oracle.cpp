#include "ltp/oracle.hpp"

#include <cmath>
#include <sstream>

#include "ltp/errors.hpp"
#include "ltp/ltp_core.hpp"
#include "ltp/quadrature.hpp"
#include "ltp/simulation.hpp"

namespace ltp {

QuadraticOracle::QuadraticOracle(InitialDensity rho0)
    : rho0_(std::move(rho0)), lambda_(rho0_.integral_weighted([](double x) { return x; }, rho0_.lower(), rho0_.upper())) {}

double QuadraticOracle::density(double t, double x) const {
    const double e = std::exp(2.0 * t);
    return rho0_((x - lambda_) * e + lambda_) * e;
}

std::vector<double> QuadraticOracle::density(double t, std::span<const double> xs) const {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = density(t, xs[i]);
    return out;
}

double QuadraticOracle::flow(double s, double t, double x) const {
    return lambda_ + (x - lambda_) * std::exp(-2.0 * (t - s));
}

double QuadraticOracle::jacobian(double s, double t) const { return std::exp(-2.0 * (t - s)); }

std::pair<double, double> QuadraticOracle::support(double t) const {
    return {flow(0.0, t, rho0_.lower()), flow(0.0, t, rho0_.upper())};
}

std::vector<double> NBodyState::centroid() const {
    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<double> c(d, 0.0);
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        m += masses[i];
        for (std::size_t k = 0; k < d; ++k) c[k] += masses[i] * positions[i * d + k];
    }
    for (double& v : c) v /= m;
    return c;
}

namespace {

void nbody_velocity(const NBodyState& s, std::span<const double> pos, const Potential& potential, bool singular,
                    std::span<double> vel) {
    const std::size_t d = static_cast<std::size_t>(s.dim);
    const std::size_t n = s.size();
    std::vector<double> diff(d);
    std::vector<double> g(d);
    std::vector<double> hs(d * d);
    std::fill(vel.begin(), vel.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double r2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                diff[k] = pos[i * d + k] - pos[j * d + k];
                r2 += diff[k] * diff[k];
            }
            if (singular && std::sqrt(r2) < 1e-12) {
                std::ostringstream os;
                os << "particles " << i << " and " << j << " collided";
                throw CollisionError(os.str(), s.step);
            }
            if (r2 == 0.0) continue;  // grad W(0) = 0 for smooth W
            potential.grad_hess(diff, g, hs);
            for (std::size_t k = 0; k < d; ++k) vel[i * d + k] -= s.masses[j] * g[k];
        }
    }
}

}  // namespace

NBodyState nbody_integrate(const NBodyState& state, const Potential& potential, double dt, std::size_t steps,
                           NBodyScheme scheme) {
    if (!(dt > 0.0)) throw ConfigError("n-body time step must be positive");
    if (potential.dim() != state.dim) throw ConfigError("potential and n-body dimensions differ");
    const bool singular = potential.classify().singular || potential.gradient_singular();
    NBodyState s = state;
    const std::size_t len = s.positions.size();
    std::vector<double> k1(len), k2(len), k3(len), k4(len), tmp(len);
    for (std::size_t n = 0; n < steps; ++n) {
        if (scheme == NBodyScheme::Euler) {
            nbody_velocity(s, s.positions, potential, singular, k1);
            for (std::size_t i = 0; i < len; ++i) s.positions[i] += dt * k1[i];
        } else {
            nbody_velocity(s, s.positions, potential, singular, k1);
            for (std::size_t i = 0; i < len; ++i) tmp[i] = s.positions[i] + 0.5 * dt * k1[i];
            nbody_velocity(s, tmp, potential, singular, k2);
            for (std::size_t i = 0; i < len; ++i) tmp[i] = s.positions[i] + 0.5 * dt * k2[i];
            nbody_velocity(s, tmp, potential, singular, k3);
            for (std::size_t i = 0; i < len; ++i) tmp[i] = s.positions[i] + dt * k3[i];
            nbody_velocity(s, tmp, potential, singular, k4);
            for (std::size_t i = 0; i < len; ++i)
                s.positions[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        ++s.step;
        s.time = state.time + static_cast<double>(n + 1) * dt;
    }
    return s;
}

EvaluationGrid default_grid(const SimulationConfig& config) {
    const InitialDensity rho0 = config.make_initial_density();
    const double reach = ShapeFunction(config.shape).support_radius() * config.h + 2.0 * config.h;
    return EvaluationGrid::covering(rho0.lower(), rho0.upper(), reach, config.grid_points);
}

DensityTrajectory reference_run(const SimulationConfig& config, std::size_t refinement,
                                std::optional<EvaluationGrid> grid) {
    if (refinement < 1) throw ConfigError("refinement must be >= 1");
    SimulationConfig fine = config;
    const double r = static_cast<double>(refinement);
    fine.h = config.h / r;
    fine.dt = config.dt / (r * r);
    // Snapshots at the same physical times as the base run.
    fine.snapshots = config.snapshots;

    DensityTrajectory out;
    out.grid = grid ? *grid : default_grid(config);
    SimulationOptions opts;
    opts.record_series = false;
    const SimulationResult run = simulate(fine, opts);
    const auto xs = out.grid.nodes();
    for (const auto& snap : run.snapshots) {
        out.times.push_back(snap.time);
        out.profiles.push_back(reconstruct_density_parallel(snap, xs));
    }
    out.final_state = run.final_state;
    out.stopped_early = run.stopped_early;
    return out;
}

}  // namespace ltp
