#include "ltp/ltp_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ltp/errors.hpp"
#include "ltp/linalg.hpp"

namespace ltp {

WeightMode parse_weight_mode(std::string_view name) {
    if (name == "cell_average") return WeightMode::CellAverage;
    if (name == "dual_kernel") return WeightMode::DualKernel;
    throw ConfigError("unknown weight mode '" + std::string(name) + "' (expected cell_average or dual_kernel)");
}

JacobianMode parse_jacobian_mode(std::string_view name) {
    if (name == "exponential") return JacobianMode::Exponential;
    if (name == "linearized") return JacobianMode::Linearized;
    throw ConfigError("unknown jacobian mode '" + std::string(name) + "' (expected exponential or linearized)");
}

std::string_view to_string(WeightMode mode) {
    return mode == WeightMode::CellAverage ? "cell_average" : "dual_kernel";
}

std::string_view to_string(JacobianMode mode) {
    return mode == JacobianMode::Exponential ? "exponential" : "linearized";
}

ParticleState init_particles(const InitialDensity& rho0, double h, WeightMode mode, const ShapeFunction& shape,
                             int dim) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid size h must be positive");
    if (dim < 1) throw ConfigError("dimension must be >= 1");
    if (mode == WeightMode::DualKernel && !shape.dual_available())
        throw UnsupportedFeature("dual_kernel weights require the B1 shape");

    // 1D particle set; d > 1 is the tensor product.
    const double reach = mode == WeightMode::CellAverage ? 0.5 * h : h;
    const long kmin = static_cast<long>(std::ceil((rho0.lower() - reach) / h));
    const long kmax = static_cast<long>(std::floor((rho0.upper() + reach) / h));
    if (kmax < kmin) throw ConfigError("initial density support contains no grid cell");

    std::vector<double> x1;
    std::vector<double> w1;
    const DualKernel dual;
    for (long k = kmin; k <= kmax; ++k) {
        const double xk = static_cast<double>(k) * h;
        double w = 0.0;
        if (mode == WeightMode::CellAverage) {
            w = rho0.integral(xk - 0.5 * h, xk + 0.5 * h);
        } else {
            const double breaks[] = {xk - 0.5 * h, xk + 0.5 * h};
            w = rho0.integral_weighted([&](double x) { return dual((x - xk) / h); }, xk - h, xk + h, breaks);
        }
        x1.push_back(xk);
        w1.push_back(w);
    }

    ParticleState s;
    s.dim = dim;
    s.h = h;
    s.shape = shape;
    const std::size_t n1 = x1.size();
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= n1;
    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t m = d * d;
    s.positions.resize(n * d);
    s.weights.resize(n);
    s.deformation.assign(n * m, 0.0);
    s.last_jacobian.assign(n * m, 0.0);
    s.volume.assign(n, std::pow(h, dim));
    s.last_jdet.assign(n, 1.0);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t rem = idx;
        double w = 1.0;
        // First coordinate varies slowest so 1D ordering is by position.
        for (std::size_t i = d; i-- > 0;) {
            const std::size_t j = rem % n1;
            rem /= n1;
            s.positions[idx * d + i] = x1[j];
            w *= w1[j];
        }
        s.weights[idx] = w;
        for (std::size_t i = 0; i < d; ++i) {
            s.deformation[idx * m + i * d + i] = 1.0;
            s.last_jacobian[idx * m + i * d + i] = 1.0;
        }
    }
    s.origins = s.positions;
    return s;
}

ParticleState step(const ParticleState& state, const Potential& potential, const StepSettings& settings) {
    if (!(settings.dt > 0.0)) throw ConfigError("time step must be positive");
    const std::size_t n = state.size();
    const int dim = state.dim;
    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t m = d * d;

    const FieldEvaluator eval(SourceCloud::from_state(state), potential, settings.rule);
    std::vector<double> grad(n * d);
    std::vector<double> hess(n * m);
    evaluate_fields_parallel(eval, state.positions, grad, hess);

    ParticleState next = state;
    next.step = state.step + 1;
    next.time = state.time + settings.dt;
    const double dt = settings.dt;
    const double min_volume = 1e-12 * std::pow(state.h, dim);

    std::vector<double> a(m);
    std::vector<double> jac(m);
    std::vector<double> jinv(m);
    for (std::size_t k = 0; k < n; ++k) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double x = state.positions[k * d + i] - dt * grad[k * d + i];
            next.positions[k * d + i] = x;
            r2 += x * x;
        }
        double jdet = 0.0;
        if (dim == 1) {
            const double mk = hess[k];
            const double jk = settings.jacobian == JacobianMode::Exponential ? std::exp(-dt * mk) : 1.0 - dt * mk;
            if (!(jk > 0.0)) {
                std::ostringstream os;
                os << "linearized Jacobian of particle " << k << " has non-positive determinant " << jk
                   << " at step " << state.step;
                throw StepRejected(os.str(), k);
            }
            jdet = jk;
            next.last_jacobian[k] = jk;
            next.deformation[k] = state.deformation[k] / jk;
        } else {
            for (std::size_t c = 0; c < m; ++c) a[c] = -dt * hess[k * m + c];
            if (settings.jacobian == JacobianMode::Exponential) {
                linalg::expm(a, dim, jac);
                jdet = std::exp(linalg::trace(a, dim));
            } else {
                linalg::identity(dim, jac);
                for (std::size_t c = 0; c < m; ++c) jac[c] += a[c];
                jdet = linalg::det(jac, dim);
                if (!(jdet > 0.0)) {
                    std::ostringstream os;
                    os << "linearized Jacobian of particle " << k << " has non-positive determinant " << jdet
                       << " at step " << state.step;
                    throw StepRejected(os.str(), k);
                }
            }
            linalg::inverse(jac, dim, jinv);
            std::copy(jac.begin(), jac.end(), next.last_jacobian.begin() + static_cast<long>(k * m));
            linalg::multiply(state.deformation_of(k), jinv, dim,
                             std::span<double>(next.deformation.data() + k * m, m));
        }
        next.last_jdet[k] = jdet;
        next.volume[k] = jdet * state.volume[k];

        if (!std::isfinite(r2) || !std::isfinite(next.volume[k]))
            throw NumericFailure("non-finite particle data at step " + std::to_string(next.step));
        if (std::sqrt(r2) > settings.domain_radius) {
            std::ostringstream os;
            os << "particle " << k << " left the domain radius " << settings.domain_radius << " at step "
               << next.step;
            throw BlowUp(os.str(), next.step);
        }
        if (next.volume[k] < min_volume) {
            std::ostringstream os;
            os << "particle " << k << " volume collapsed to " << next.volume[k] << " at step " << next.step;
            throw BlowUp(os.str(), next.step);
        }
    }
    return next;
}

double reconstruct_density(const ParticleState& state, double x) {
    const double r = state.shape.support_radius();
    const double inv_h = 1.0 / state.h;
    double rho = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k) {
        const double z = state.deformation[k] * (x - state.positions[k]) * inv_h;
        if (std::abs(z) >= r) continue;
        rho += state.weights[k] / state.volume[k] * state.shape(z);
    }
    return rho;
}

double reconstruct_density(const ParticleState& state, std::span<const double> x) {
    if (state.dim == 1) return reconstruct_density(state, x[0]);
    const std::size_t d = static_cast<std::size_t>(state.dim);
    const std::size_t m = d * d;
    std::vector<double> z(d);
    double rho = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                acc += state.deformation[k * m + i * d + j] * (x[j] - state.positions[k * d + j]);
            z[i] = acc / state.h;
        }
        const double phi = state.shape.eval(z);
        if (phi != 0.0) rho += state.weights[k] / state.volume[k] * phi;
    }
    return rho;
}

std::vector<double> reconstruct_density_serial(const ParticleState& state, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = reconstruct_density(state, xs[i]);
    return out;
}

std::vector<double> reconstruct_density_parallel(const ParticleState& state, std::span<const double> xs) {
    std::vector<double> out(xs.size());
    const long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = reconstruct_density(state, xs[static_cast<std::size_t>(i)]);
    return out;
}

double SampledField::operator()(double at) const {
    if (x.empty()) return 0.0;
    if (at <= x.front()) return values.front();
    if (at >= x.back()) return values.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double x0 = x[i - 1];
    const double x1 = x[i];
    if (x1 == x0) return values[i];
    const double t = (at - x0) / (x1 - x0);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

double SampledField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::vector<std::size_t> order_by_position(const ParticleState& state) {
    std::vector<std::size_t> idx(state.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return state.positions[a] < state.positions[b]; });
    return idx;
}

void require_1d(const ParticleState& state, const char* what) {
    if (state.dim != 1) throw UnsupportedFeature(std::string(what) + " is implemented for d = 1 only");
}

}  // namespace

SampledField reconstruct_velocity_field(const ParticleState& state, const Potential& potential,
                                        const QuadratureRule& rule) {
    require_1d(state, "velocity reconstruction");
    if (state.size() < 2) throw ConfigError("velocity reconstruction needs at least two particles");
    const FieldEvaluator eval(SourceCloud::from_state(state), potential, rule);
    std::vector<double> grad(state.size());
    std::vector<double> hess(state.size());
    evaluate_fields_parallel(eval, state.positions, grad, hess);
    SampledField f;
    for (std::size_t k : order_by_position(state)) {
        f.x.push_back(state.positions[k]);
        f.values.push_back(-grad[k]);
    }
    return f;
}

SampledField reconstruct_size_field(const ParticleState& state) {
    require_1d(state, "size reconstruction");
    if (state.size() < 2) throw ConfigError("size reconstruction needs at least two particles");
    SampledField f;
    for (std::size_t k : order_by_position(state)) {
        f.x.push_back(state.positions[k]);
        f.values.push_back(state.volume[k]);
    }
    return f;
}

std::size_t max_overlap(const ParticleState& state) {
    require_1d(state, "overlap count");
    const double r = state.shape.support_radius();
    std::vector<std::pair<double, int>> events;
    events.reserve(2 * state.size());
    for (std::size_t k = 0; k < state.size(); ++k) {
        // Open supports; the trim keeps rounding from joining touching ends.
        const double half = r * state.h / state.deformation[k] * (1.0 - 1e-9);
        events.emplace_back(state.positions[k] - half, +1);
        events.emplace_back(state.positions[k] + half, -1);
    }
    // At equal coordinates, closings come first.
    std::sort(events.begin(), events.end());
    long cur = 0;
    long best = 0;
    for (const auto& [pos, delta] : events) {
        cur += delta;
        best = std::max(best, cur);
    }
    return static_cast<std::size_t>(best);
}

std::pair<double, double> support_bounds(const ParticleState& state) {
    require_1d(state, "support bounds");
    const double r = state.shape.support_radius();
    double lo = 1e300;
    double hi = -1e300;
    for (std::size_t k = 0; k < state.size(); ++k) {
        const double half = r * state.h / state.deformation[k];
        lo = std::min(lo, state.positions[k] - half);
        hi = std::max(hi, state.positions[k] + half);
    }
    return {lo, hi};
}

Diagnostics diagnostics(const ParticleState& state) {
    Diagnostics diag;
    const std::size_t d = static_cast<std::size_t>(state.dim);
    diag.total_mass = state.total_mass();
    diag.centroid.assign(d, 0.0);
    for (std::size_t k = 0; k < state.size(); ++k)
        for (std::size_t i = 0; i < d; ++i) diag.centroid[i] += state.weights[k] * state.positions[k * d + i];
    for (double& c : diag.centroid) c /= diag.total_mass;
    if (!state.last_jdet.empty()) {
        const auto [lo, hi] = std::minmax_element(state.last_jdet.begin(), state.last_jdet.end());
        diag.min_j = *lo;
        diag.max_j = *hi;
    }
    if (!state.volume.empty()) diag.min_volume = *std::min_element(state.volume.begin(), state.volume.end());
    diag.max_overlap = state.dim == 1 ? max_overlap(state) : 0;
    return diag;
}

}  // namespace ltp
