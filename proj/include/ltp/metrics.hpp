#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"

namespace ltp {

class QuadraticOracle;

/// Uniform grid x_i = x_min + i * spacing, i = 0..points-1.
struct EvaluationGrid {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t points = 4096;

    double spacing() const { return (x_max - x_min) / static_cast<double>(points - 1); }
    std::vector<double> nodes() const;
    bool same_as(const EvaluationGrid& other) const;

    /// Grid over [lo - margin, hi + margin].
    static EvaluationGrid covering(double lo, double hi, double margin, std::size_t points = 4096);
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// ||f - g||_p on the grid: composite Simpson for finite p, max for p = inf.
double lp_error(std::span<const double> f, std::span<const double> g, const EvaluationGrid& grid, double p);

/// Composite Simpson integral of sampled values (3/8 rule on the last three
/// intervals when the interval count is odd).
double simpson(std::span<const double> values, double spacing);

/// Bounded-Lipschitz distance between two cell-mass vectors on a grid of the
/// given spacing: max sum_i psi_i (mu_i - nu_i) over |psi_i| <= 1 and
/// |psi_{i+1} - psi_i| <= spacing. Solved exactly by a dynamic program over
/// concave piecewise-linear value functions.
double dbl_distance(std::span<const double> mu, std::span<const double> nu, double spacing);

/// Cell masses f_i * spacing.
std::vector<double> cell_masses(std::span<const double> density, double spacing);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square residual in log space
};

/// Least squares on (log h, log error); needs >= 3 positive pairs.
RateFit fit_rate(std::span<const std::pair<double, double>> pairs);

struct FlowDiagnostics {
    std::vector<double> e_flow;        // e_F^n, n = 0..len-2
    std::vector<double> e_jacobian;    // e_j^n, n = 0..len-2
    std::vector<double> e_integrated;  // integrated-flow error, n = 0..len-1
};

/// Local flow, Jacobian-determinant and integrated-flow errors of a
/// consecutive 1D state history against the closed-form quadratic flow.
/// Suprema over particle supports use 9 evenly spaced samples.
FlowDiagnostics flow_diagnostics(std::span<const ParticleState> history, const Potential& potential,
                                 const QuadraticOracle& oracle);

}  // namespace ltp
