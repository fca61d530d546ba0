#pragma once

#include <functional>
#include <vector>

namespace ltp {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n);
    int size() const { return static_cast<int>(nodes.size()); }
};

/// Settings for the per-particle convolution quadrature. Near-singular 1D
/// pieces are integrated in closed form, so grading_levels and
/// tolerance_target are validated and recorded but do not change results.
struct QuadratureRule {
    int points_per_piece = 5;
    int grading_levels = 4;
    double tolerance_target = 1e-8;

    /// Throws ConfigError on out-of-range settings.
    void validate() const;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b] to the given relative tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tolerance = 1e-12);

}  // namespace ltp
