#include "ltp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltp/errors.hpp"
#include "ltp/oracle.hpp"

namespace ltp {

std::vector<double> EvaluationGrid::nodes() const {
    std::vector<double> xs(points);
    const double dx = spacing();
    for (std::size_t i = 0; i < points; ++i) xs[i] = x_min + dx * static_cast<double>(i);
    return xs;
}

bool EvaluationGrid::same_as(const EvaluationGrid& other) const {
    return x_min == other.x_min && x_max == other.x_max && points == other.points;
}

EvaluationGrid EvaluationGrid::covering(double lo, double hi, double margin, std::size_t points) {
    if (points < 2 || !(hi >= lo)) throw std::invalid_argument("invalid evaluation grid");
    return {lo - margin, hi + margin, points};
}

double simpson(std::span<const double> v, double dx) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * dx * (v[0] + v[1]);
    const std::size_t intervals = n - 1;
    std::size_t end = intervals % 2 == 0 ? n - 1 : n - 4;  // last index of the Simpson part
    double s = 0.0;
    if (end >= 2) {
        double acc = v[0] + v[end];
        for (std::size_t i = 1; i < end; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
        s = acc * dx / 3.0;
    } else {
        end = 0;
    }
    if (end != n - 1) {
        const std::size_t i = n - 4;
        s += 3.0 * dx / 8.0 * (v[i] + 3.0 * v[i + 1] + 3.0 * v[i + 2] + v[i + 3]);
    }
    return s;
}

double lp_error(std::span<const double> f, std::span<const double> g, const EvaluationGrid& grid, double p) {
    if (f.size() != g.size() || f.size() != grid.points)
        throw std::invalid_argument("lp_error: sampled functions do not match the grid");
    if (!(p >= 1.0)) throw std::invalid_argument("lp_error: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
        return m;
    }
    std::vector<double> diff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) diff[i] = std::pow(std::abs(f[i] - g[i]), p);
    return std::pow(std::max(simpson(diff, grid.spacing()), 0.0), 1.0 / p);
}

std::vector<double> cell_masses(std::span<const double> density, double spacing) {
    std::vector<double> m(density.size());
    for (std::size_t i = 0; i < density.size(); ++i) m[i] = density[i] * spacing;
    return m;
}

namespace {

// Concave piecewise-linear function on [-1, 1].
struct ConcavePL {
    std::vector<double> x;
    std::vector<double> y;

    double at(double t) const {
        if (t <= x.front()) return y.front();
        if (t >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double dx = x[i] - x[i - 1];
        if (dx <= 0.0) return std::max(y[i], y[i - 1]);
        return y[i - 1] + (t - x[i - 1]) / dx * (y[i] - y[i - 1]);
    }
};

// g(t) = max_{|s - t| <= delta, |s| <= 1} f(s), restricted to [-1, 1].
ConcavePL window_max(const ConcavePL& f, double delta) {
    const auto ymax = *std::max_element(f.y.begin(), f.y.end());
    std::size_t il = 0;
    while (f.y[il] < ymax) ++il;
    std::size_t ir = f.y.size() - 1;
    while (f.y[ir] < ymax) --ir;

    ConcavePL shifted;
    for (std::size_t j = 0; j <= il; ++j) {
        shifted.x.push_back(f.x[j] - delta);
        shifted.y.push_back(f.y[j]);
    }
    for (std::size_t j = ir; j < f.x.size(); ++j) {
        shifted.x.push_back(f.x[j] + delta);
        shifted.y.push_back(f.y[j]);
    }

    ConcavePL g;
    g.x.push_back(-1.0);
    g.y.push_back(shifted.at(-1.0));
    for (std::size_t j = 0; j < shifted.x.size(); ++j) {
        if (shifted.x[j] > -1.0 && shifted.x[j] < 1.0) {
            g.x.push_back(shifted.x[j]);
            g.y.push_back(shifted.y[j]);
        }
    }
    g.x.push_back(1.0);
    g.y.push_back(shifted.at(1.0));
    return g;
}

}  // namespace

double dbl_distance(std::span<const double> mu, std::span<const double> nu, double spacing) {
    if (mu.empty() || mu.size() != nu.size()) throw std::invalid_argument("dbl_distance: empty or mismatched grids");
    if (!(spacing > 0.0)) throw std::invalid_argument("dbl_distance: spacing must be positive");
    ConcavePL v;
    const double m0 = mu[0] - nu[0];
    v.x = {-1.0, 1.0};
    v.y = {-m0, m0};
    for (std::size_t i = 1; i < mu.size(); ++i) {
        v = window_max(v, spacing);
        const double mi = mu[i] - nu[i];
        for (std::size_t j = 0; j < v.x.size(); ++j) v.y[j] += mi * v.x[j];
    }
    return std::max(0.0, *std::max_element(v.y.begin(), v.y.end()));
}

RateFit fit_rate(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("fit_rate needs at least three (h, error) pairs");
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [h, e] : pairs) {
        if (!(h > 0.0) || !(e > 0.0)) throw std::invalid_argument("fit_rate needs positive h and errors");
        sx += std::log(h);
        sy += std::log(e);
    }
    const double n = static_cast<double>(pairs.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [h, e] : pairs) {
        const double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(e) - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate needs distinct h values");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (const auto& [h, e] : pairs) {
        const double r = std::log(e) - (fit.intercept + fit.slope * std::log(h));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

FlowDiagnostics flow_diagnostics(std::span<const ParticleState> history, const Potential& potential,
                                 const QuadraticOracle& oracle) {
    if (potential.kind() != PotentialKind::Quadratic || potential.dim() != 1)
        throw UnsupportedFeature("flow diagnostics need the closed-form flow of the 1D quadratic potential");
    if (history.empty()) return {};
    constexpr int kSamples = 9;
    FlowDiagnostics out;
    const double radius = history.front().shape.support_radius();

    for (std::size_t n = 0; n + 1 < history.size(); ++n) {
        const ParticleState& cur = history[n];
        const ParticleState& nxt = history[n + 1];
        if (cur.dim != 1 || nxt.size() != cur.size()) throw std::invalid_argument("inconsistent state history");
        const double t0 = cur.time;
        const double t1 = nxt.time;
        const double j_exact = oracle.jacobian(t0, t1);
        double ef = 0.0;
        double ej = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double xk = cur.positions[k];
            const double half = radius * cur.h / cur.deformation[k];
            const double jk = nxt.last_jacobian[k];
            for (int s = 0; s < kSamples; ++s) {
                const double x = xk + half * (-1.0 + 2.0 * s / (kSamples - 1));
                const double approx = nxt.positions[k] + jk * (x - xk);
                ef = std::max(ef, std::abs(oracle.flow(t0, t1, x) - approx));
            }
            ej = std::max(ej, std::abs(1.0 / j_exact - 1.0 / nxt.last_jdet[k]));
        }
        out.e_flow.push_back(ef);
        out.e_jacobian.push_back(ej);
    }

    const ParticleState& first = history.front();
    for (std::size_t n = 0; n < history.size(); ++n) {
        if (n == 0) {
            out.e_integrated.push_back(0.0);
            continue;
        }
        const ParticleState& cur = history[n];
        double eb = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double x0 = cur.origins[k];
            const double half = radius * first.h;
            const double jbar = 1.0 / cur.deformation[k];
            for (int s = 0; s < kSamples; ++s) {
                const double x = x0 + half * (-1.0 + 2.0 * s / (kSamples - 1));
                const double approx = cur.positions[k] + jbar * (x - x0);
                eb = std::max(eb, std::abs(oracle.flow(first.time, cur.time, x) - approx));
            }
        }
        out.e_integrated.push_back(eb);
    }
    return out;
}

}  // namespace ltp
