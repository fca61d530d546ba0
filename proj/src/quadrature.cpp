#include "ltp/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ltp/errors.hpp"

namespace ltp {

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; nodes are
    // symmetric so only the first half is solved for.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void QuadratureRule::validate() const {
    if (points_per_piece < 2) throw ConfigError("quadrature.points_per_piece must be >= 2");
    if (grading_levels < 0) throw ConfigError("quadrature.grading_levels must be >= 0");
    if (!(tolerance_target > 0.0)) throw ConfigError("quadrature.tolerance must be positive");
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tolerance) {
    if (!(b > a)) return 0.0;
    // The Kronrod error estimate is roundoff-bound below ~1e-12 on short
    // intervals; tighter requests only bisect to the depth limit. The 31-point
    // rule itself is at machine precision on the smooth profiles used here.
    const double tol = std::max(tolerance, 1e-12);
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

}  // namespace ltp
