#include "ltp/sp_baseline.hpp"

#include <cmath>
#include <sstream>

#include "ltp/errors.hpp"

namespace ltp {

SPState SPState::from_ltp(const ParticleState& initial, double eps) {
    if (initial.dim != 1) throw UnsupportedFeature("the SP baseline is implemented for d = 1 only");
    if (!(eps > 0.0)) throw ConfigError("sp.epsilon must be positive");
    SPState s;
    s.eps = eps;
    s.step = initial.step;
    s.time = initial.time;
    s.shape = initial.shape;
    s.positions = initial.positions;
    s.weights = initial.weights;
    return s;
}

double sp_reconstruct(const SPState& state, double x) {
    const double r = state.shape.support_radius();
    const double inv = 1.0 / state.eps;
    double rho = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k) {
        const double z = (x - state.positions[k]) * inv;
        if (std::abs(z) >= r) continue;
        rho += state.weights[k] * inv * state.shape(z);
    }
    return rho;
}

std::vector<double> sp_reconstruct_grid(const SPState& state, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    const long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = sp_reconstruct(state, xs[static_cast<std::size_t>(i)]);
    return out;
}

SPState sp_step(const SPState& state, const Potential& potential, double dt, const QuadratureRule& rule,
                double domain_radius) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    const FieldEvaluator eval(SourceCloud::fixed_size(state.positions, state.weights, state.eps, state.shape),
                              potential, rule);
    const std::size_t n = state.size();
    std::vector<double> grad(n);
    std::vector<double> hess(n);
    evaluate_fields_parallel(eval, state.positions, grad, hess);

    SPState next = state;
    next.step = state.step + 1;
    next.time = state.time + dt;
    for (std::size_t k = 0; k < n; ++k) {
        next.positions[k] = state.positions[k] - dt * grad[k];
        if (!std::isfinite(next.positions[k])) throw NumericFailure("non-finite SP particle position");
        if (std::abs(next.positions[k]) > domain_radius) {
            std::ostringstream os;
            os << "SP particle " << k << " left the domain radius at step " << next.step;
            throw BlowUp(os.str(), next.step);
        }
    }
    return next;
}

}  // namespace ltp
