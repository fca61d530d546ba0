#include "ltp/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltp/errors.hpp"
#include "ltp/linalg.hpp"

namespace ltp {

namespace {

// Pieces closer than this (reference units) to the target are integrated in
// closed form; Gauss nodes are accurate enough beyond it.
constexpr double kNearBand = 2.0;

void check_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw NumericFailure(std::string("non-finite ") + what + " field value");
}

}  // namespace

SourceCloud SourceCloud::from_state(const ParticleState& state) {
    SourceCloud cloud;
    cloud.dim = state.dim;
    cloud.shape = state.shape;
    cloud.centers = state.positions;
    cloud.weights = state.weights;
    const std::size_t m = state.mat_size();
    cloud.maps.resize(state.size() * m);
    for (std::size_t k = 0; k < state.size(); ++k) {
        std::span<double> out(cloud.maps.data() + k * m, m);
        linalg::inverse(state.deformation_of(k), state.dim, out);
        for (double& v : out) v *= state.h;
    }
    return cloud;
}

SourceCloud SourceCloud::fixed_size(std::span<const double> centers, std::span<const double> weights, double eps,
                                    const ShapeFunction& shape, int dim) {
    if (!(eps > 0.0)) throw ConfigError("particle radius eps must be positive");
    SourceCloud cloud;
    cloud.dim = dim;
    cloud.shape = shape;
    cloud.centers.assign(centers.begin(), centers.end());
    cloud.weights.assign(weights.begin(), weights.end());
    const std::size_t m = static_cast<std::size_t>(dim * dim);
    cloud.maps.assign(cloud.weights.size() * m, 0.0);
    for (std::size_t k = 0; k < cloud.weights.size(); ++k)
        for (int i = 0; i < dim; ++i) cloud.maps[k * m + static_cast<std::size_t>(i * dim + i)] = eps;
    return cloud;
}

FieldEvaluator::FieldEvaluator(SourceCloud sources, const Potential& potential, const QuadratureRule& rule,
                               bool use_moments)
    : sources_(std::move(sources)), potential_(potential), rule_(rule), gauss_(rule.points_per_piece) {
    rule_.validate();
    if (potential_.dim() != sources_.dim) throw ConfigError("potential and particle dimensions differ");
    const int d = sources_.dim;
    const auto pieces = sources_.shape.profile().pieces();
    const std::size_t npieces = pieces.size();
    const std::size_t q = static_cast<std::size_t>(gauss_.size());

    // 1D reference nodes per piece.
    std::vector<double> z1(npieces * q);
    std::vector<double> w1(npieces * q);
    for (std::size_t p = 0; p < npieces; ++p) {
        const double mid = 0.5 * (pieces[p].lo + pieces[p].hi);
        const double half = 0.5 * (pieces[p].hi - pieces[p].lo);
        for (std::size_t i = 0; i < q; ++i) {
            const double z = mid + half * gauss_.nodes[i];
            z1[p * q + i] = z;
            w1[p * q + i] = half * gauss_.weights[i] * pieces[p](z);
        }
    }

    const std::size_t n = sources_.size();
    if (d == 1) {
        exact_near_ = !potential_.polynomial_kernel();
        if (exact_near_)
            for (const auto& t : potential_.terms())
                if (!(t.power > 1.0))
                    throw UnsupportedPotential("1D fields need every power above 1, got " + potential_.describe());
        nodes_per_piece_ = q;
        nodes_per_source_ = npieces * q;
        ref_z_ = z1;
        ref_w_ = w1;
        node_y_.resize(n * nodes_per_source_);
        node_w_.resize(n * nodes_per_source_);
        inv_scale_.resize(n);
        for (std::size_t l = 0; l < n; ++l) {
            const double c = sources_.centers[l];
            const double a = sources_.maps[l];
            if (!(a > 0.0)) throw NumericFailure("particle map must be positive in 1D");
            inv_scale_[l] = 1.0 / a;
            for (std::size_t i = 0; i < nodes_per_source_; ++i) {
                node_y_[l * nodes_per_source_ + i] = c + a * ref_z_[i];
                node_w_[l * nodes_per_source_ + i] = sources_.weights[l] * ref_w_[i];
            }
        }
        if (use_moments && potential_.polynomial_kernel()) {
            // Degree of y^j times a cubic piece stays within the rule's exactness.
            double top = 0.0;
            for (const auto& t : potential_.terms()) top = std::max(top, t.power);
            const auto count = static_cast<std::size_t>(top);
            if (2 * q >= count + 4) {
                moments_path_ = true;
                moments_.assign(count, 0.0);
                for (std::size_t i = 0; i < node_y_.size(); ++i) {
                    double yj = node_w_[i];
                    for (std::size_t j = 0; j < count; ++j) {
                        moments_[j] += yj;
                        yj *= node_y_[i];
                    }
                }
            }
        }
        return;
    }

    // Tensor product of the 1D rule.
    const std::size_t per_dim = npieces * q;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= per_dim;
    nodes_per_source_ = total;
    ref_z_.resize(total * d);
    ref_w_.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            const std::size_t j = rem % per_dim;
            rem /= per_dim;
            ref_z_[idx * d + i] = z1[j];
            w *= w1[j];
        }
        ref_w_[idx] = w;
    }
    const std::size_t m = static_cast<std::size_t>(d * d);
    node_y_.resize(n * total * d);
    node_w_.resize(n * total);
    for (std::size_t l = 0; l < n; ++l) {
        const double* a = sources_.maps.data() + l * m;
        for (std::size_t idx = 0; idx < total; ++idx) {
            for (int i = 0; i < d; ++i) {
                double y = sources_.centers[l * d + i];
                for (int j = 0; j < d; ++j) y += a[i * d + j] * ref_z_[idx * d + j];
                node_y_[(l * total + idx) * d + i] = y;
            }
            node_w_[l * total + idx] = sources_.weights[l] * ref_w_[idx];
        }
    }
}

void FieldEvaluator::near_piece(std::size_t l, std::size_t piece, double zstar, double& g, double& hs) const {
    const auto& poly = sources_.shape.profile().pieces()[piece];
    const double a = sources_.maps[l];
    const double weight = sources_.weights[l];

    // Taylor shift: phi(z) = sum_j d_j t^j with t = z - z*.
    std::vector<double> d = poly.coeffs;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t k = n - 1; k-- > i;) d[k] += zstar * d[k + 1];

    // int s^m ds over the positive and mirrored negative parts of [t0, t1].
    const double t0 = poly.lo - zstar;
    const double t1 = poly.hi - zstar;
    const double p0 = std::max(t0, 0.0);
    const double p1 = std::max(t1, 0.0);
    const double n0 = std::max(-t1, 0.0);
    const double n1 = std::max(-t0, 0.0);
    auto span_int = [](double lo, double hi, double m) {
        return hi > lo ? (std::pow(hi, m + 1.0) - std::pow(lo, m + 1.0)) / (m + 1.0) : 0.0;
    };

    // With v = -a t: W'(v) = -c p a^(p-1) |t|^(p-1) sgn(t), W''(v) = c p (p-1) a^(p-2) |t|^(p-2).
    for (const auto& term : potential_.terms()) {
        const double p = term.power;
        double gi = 0.0;
        double hi = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (d[j] == 0.0) continue;
            const double odd = (j % 2 == 0) ? 1.0 : -1.0;
            const double gp = span_int(p0, p1, p - 1.0 + j);
            const double gn = span_int(n0, n1, p - 1.0 + j);
            const double hp = span_int(p0, p1, p - 2.0 + j);
            const double hn = span_int(n0, n1, p - 2.0 + j);
            gi += d[j] * (gp - odd * gn);
            hi += d[j] * (hp + odd * hn);
        }
        g -= weight * term.coef * p * std::pow(a, p - 1.0) * gi;
        hs += weight * term.coef * p * (p - 1.0) * std::pow(a, p - 2.0) * hi;
    }
}

void FieldEvaluator::evaluate_1d(double x, double& grad, double& hess) const {
    if (moments_path_) {
        // (x - y)^m = sum_j C(m, j) x^(m-j) (-y)^j, integrated against rho.
        auto expand = [&](int m) {
            double acc = 0.0;
            double binom = 1.0;
            for (int j = 0; j <= m; ++j) {
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                acc += binom * std::pow(x, m - j) * sign * moments_[static_cast<std::size_t>(j)];
                binom = binom * (m - j) / (j + 1);
            }
            return acc;
        };
        double g = 0.0;
        double hs = 0.0;
        for (const auto& t : potential_.terms()) {
            const int p = static_cast<int>(t.power);
            g += t.coef * p * expand(p - 1);
            hs += t.coef * p * (p - 1) * expand(p - 2);
        }
        grad = g;
        hess = hs;
        return;
    }
    double g = 0.0;
    double hs = 0.0;
    const std::size_t n = sources_.size();
    const std::size_t per = nodes_per_source_;
    const bool singular = potential_.hessian_singular();
    const double reach = sources_.shape.support_radius() + kNearBand;
    const auto pieces = sources_.shape.profile().pieces();

    auto far_nodes = [&](std::size_t begin, std::size_t end) {
        const double* y = node_y_.data();
        const double* w = node_w_.data();
        for (std::size_t i = begin; i < end; ++i) {
            const double v = x - y[i];
            if (v == 0.0 && singular) {
                skipped_.fetch_add(1, std::memory_order_relaxed);
                continue;
            }
            double gg = 0.0;
            double hh = 0.0;
            potential_.grad_hess_1d(v, gg, hh);
            g += w[i] * gg;
            hs += w[i] * hh;
        }
    };

    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t base = l * per;
        if (exact_near_) {
            const double zstar = (x - sources_.centers[l]) * inv_scale_[l];
            if (std::abs(zstar) < reach) {
                for (std::size_t p = 0; p < pieces.size(); ++p) {
                    const double dist = std::max({pieces[p].lo - zstar, zstar - pieces[p].hi, 0.0});
                    if (dist < kNearBand)
                        near_piece(l, p, zstar, g, hs);
                    else
                        far_nodes(base + p * nodes_per_piece_, base + (p + 1) * nodes_per_piece_);
                }
                continue;
            }
        }
        far_nodes(base, base + per);
    }
    grad = g;
    hess = hs;
}

void FieldEvaluator::evaluate_nd(std::span<const double> x, std::span<double> grad, std::span<double> hess) const {
    const int d = sources_.dim;
    const std::size_t m = static_cast<std::size_t>(d * d);
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    std::vector<double> diff(static_cast<std::size_t>(d));
    std::vector<double> gg(static_cast<std::size_t>(d));
    std::vector<double> hh(m);
    const std::size_t total = node_w_.size();
    for (std::size_t i = 0; i < total; ++i) {
        for (int c = 0; c < d; ++c) diff[c] = x[c] - node_y_[i * d + c];
        if (!potential_.grad_hess(diff, gg, hh)) {
            skipped_.fetch_add(1, std::memory_order_relaxed);
            continue;
        }
        const double w = node_w_[i];
        for (int c = 0; c < d; ++c) grad[c] += w * gg[c];
        for (std::size_t c = 0; c < m; ++c) hess[c] += w * hh[c];
    }
}

void FieldEvaluator::evaluate(std::span<const double> x, std::span<double> grad, std::span<double> hess) const {
    if (sources_.dim == 1) {
        evaluate_1d(x[0], grad[0], hess[0]);
        return;
    }
    evaluate_nd(x, grad, hess);
}

std::vector<double> convolve_at(FieldSelector selector, const ParticleState& state, const Potential& potential,
                                std::span<const double> x, const QuadratureRule& rule) {
    const int d = state.dim;
    if (static_cast<int>(x.size()) != d) throw ConfigError("target point has wrong dimension");
    for (double xi : x)
        if (!std::isfinite(xi)) throw NumericFailure("non-finite target point");
    const FieldEvaluator eval(SourceCloud::from_state(state), potential, rule);
    std::vector<double> grad(static_cast<std::size_t>(d));
    std::vector<double> hess(static_cast<std::size_t>(d * d));
    eval.evaluate(x, grad, hess);
    check_finite(grad, "gradient");
    check_finite(hess, "hessian");
    switch (selector) {
        case FieldSelector::Grad: return grad;
        case FieldSelector::Hess: return hess;
        case FieldSelector::Lap: return {linalg::trace(hess, d)};
    }
    return {};
}

std::vector<double> velocity_at(const ParticleState& state, const Potential& potential, std::span<const double> x,
                                const QuadratureRule& rule) {
    auto u = convolve_at(FieldSelector::Grad, state, potential, x, rule);
    for (double& v : u) v = -v;
    return u;
}

void evaluate_fields_serial(const FieldEvaluator& eval, std::span<const double> targets, std::span<double> grad,
                            std::span<double> hess) {
    const std::size_t d = static_cast<std::size_t>(eval.dim());
    const std::size_t n = targets.size() / d;
    for (std::size_t k = 0; k < n; ++k)
        eval.evaluate(targets.subspan(k * d, d), grad.subspan(k * d, d), hess.subspan(k * d * d, d * d));
    check_finite(grad, "gradient");
    check_finite(hess, "hessian");
}

void evaluate_fields_parallel(const FieldEvaluator& eval, std::span<const double> targets, std::span<double> grad,
                              std::span<double> hess) {
    const std::size_t d = static_cast<std::size_t>(eval.dim());
    const long n = static_cast<long>(targets.size() / d);
#pragma omp parallel for schedule(dynamic, 8)
    for (long k = 0; k < n; ++k) {
        const std::size_t kk = static_cast<std::size_t>(k);
        eval.evaluate(targets.subspan(kk * d, d), grad.subspan(kk * d, d), hess.subspan(kk * d * d, d * d));
    }
    check_finite(grad, "gradient");
    check_finite(hess, "hessian");
}

}  // namespace ltp
