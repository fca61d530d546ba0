#pragma once

#include <atomic>
#include <cstddef>
#include <span>
#include <vector>

#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"
#include "ltp/quadrature.hpp"
#include "ltp/shape_kernels.hpp"

namespace ltp {

enum class FieldSelector { Grad, Hess, Lap };

/// Deformed particles seen as sources of a convolution field: particle l
/// occupies y = center_l + map_l z for z in the reference support, carrying
/// mass weight_l with profile phi(z).
struct SourceCloud {
    int dim = 1;
    ShapeFunction shape{ShapeFamily::B3};
    std::vector<double> centers;
    std::vector<double> weights;
    std::vector<double> maps;  // h (D_l)^-1 for LTP, eps I for fixed-size particles

    std::size_t size() const { return weights.size(); }

    static SourceCloud from_state(const ParticleState& state);
    static SourceCloud fixed_size(std::span<const double> centers, std::span<const double> weights, double eps,
                                  const ShapeFunction& shape, int dim = 1);
};

/// Evaluates (grad W * rho)(x) and (D^2 W * rho)(x) for the density carried by
/// a SourceCloud, with composite Gauss-Legendre quadrature over the spline
/// pieces in reference coordinates.
///
/// In 1D, for non-polynomial kernels, pieces within two reference units of the
/// kernel root z* = map^-1 (x - center) are integrated in closed form: the
/// piece polynomial is re-expanded in t = z - z* and each |t|^q t^j term has an
/// exact antiderivative for every power above 1. Other pieces use a
/// precomputed node list. Summation order is fixed (source index, piece, node).
///
/// In 1D with a polynomial kernel (even integer powers) the convolution is
/// expanded binomially in moments of rho, which the same nodes integrate
/// exactly, so each target costs O(1). `use_moments = false` forces the
/// direct node sum.
class FieldEvaluator {
public:
    FieldEvaluator(SourceCloud sources, const Potential& potential, const QuadratureRule& rule = {},
                   bool use_moments = true);
    FieldEvaluator(const FieldEvaluator&) = delete;
    FieldEvaluator& operator=(const FieldEvaluator&) = delete;

    int dim() const { return sources_.dim; }
    const SourceCloud& sources() const { return sources_; }
    const Potential& potential() const { return potential_; }

    /// grad has d entries, hess d*d (row-major).
    void evaluate(std::span<const double> x, std::span<double> grad, std::span<double> hess) const;
    void evaluate_1d(double x, double& grad, double& hess) const;

    /// Quadrature nodes dropped because they landed on a kernel singularity.
    std::size_t skipped_nodes() const { return skipped_.load(std::memory_order_relaxed); }

private:
    void evaluate_nd(std::span<const double> x, std::span<double> grad, std::span<double> hess) const;
    void near_piece(std::size_t l, std::size_t piece, double zstar, double& g, double& hs) const;

    SourceCloud sources_;
    Potential potential_;
    QuadratureRule rule_;
    GaussLegendre gauss_;
    bool exact_near_ = false;  // 1D non-polynomial: near pieces in closed form
    bool moments_path_ = false;
    std::vector<double> moments_;  // int y^j rho(y) dy

    // Reference nodes: pieces x nodes (1D) or tensor product (d > 1).
    std::size_t nodes_per_source_ = 0;
    std::size_t nodes_per_piece_ = 0;
    std::vector<double> ref_z_;
    std::vector<double> ref_w_;
    // Physical nodes per source.
    std::vector<double> node_y_;
    std::vector<double> node_w_;
    std::vector<double> inv_scale_;  // 1D: 1 / map_l

    mutable std::atomic<std::size_t> skipped_{0};
};

/// Convolution of the selected kernel with rho_h at x: d values for Grad,
/// d*d for Hess, one for Lap.
std::vector<double> convolve_at(FieldSelector selector, const ParticleState& state, const Potential& potential,
                                std::span<const double> x, const QuadratureRule& rule = {});

/// u(x) = -(grad W * rho_h)(x).
std::vector<double> velocity_at(const ParticleState& state, const Potential& potential, std::span<const double> x,
                                const QuadratureRule& rule = {});

// Batch kernels over many targets (targets laid out N*d). The serial version
// is the reference; the OpenMP version performs the same per-target
// reduction and is bit-identical to it.
void evaluate_fields_serial(const FieldEvaluator& eval, std::span<const double> targets, std::span<double> grad,
                            std::span<double> hess);
void evaluate_fields_parallel(const FieldEvaluator& eval, std::span<const double> targets, std::span<double> grad,
                              std::span<double> hess);

}  // namespace ltp
