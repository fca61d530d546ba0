#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltp/shape_kernels.hpp"

namespace ltp {

enum class InitialDensityId { Rho1Gaussians, Rho2Indicator, Rho3Bump, Custom };

InitialDensityId parse_initial_density(std::string_view name);
std::string_view to_string(InitialDensityId id);

/// Unit-mass initial profile on a compact interval. In d > 1 the density is
/// the tensor product of the 1D profile, which keeps unit mass.
class InitialDensity {
public:
    /// (exp(-30(x-0.5)^2) + 2 exp(-50(x+0.3)^2)) on [-1, 1], normalized.
    static InitialDensity rho1();
    /// Indicator of [-1, 1], normalized to 1/2.
    static InitialDensity rho2();
    /// exp(1/(x^2-1)) on (-1, 1), normalized.
    static InitialDensity rho3();
    static InitialDensity make(InitialDensityId id);
    /// Arbitrary non-negative profile on [lower, upper]; normalized here.
    static InitialDensity custom(std::function<double(double)> profile, double lower, double upper,
                                 std::string name = "custom");

    InitialDensityId id() const { return id_; }
    const std::string& name() const { return name_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    /// Factor applied to the raw profile to obtain unit mass.
    double normalization() const { return scale_; }

    double operator()(double x) const {
        if (x < lower_ || x > upper_) return 0.0;
        return scale_ * raw_(x);
    }
    double eval(std::span<const double> x) const;

    /// Exact-to-quadrature integral of the density over [a, b].
    double integral(double a, double b) const;
    /// Integral of density times g over [a, b]; `breaks` are extra split points of g.
    double integral_weighted(const std::function<double(double)>& g, double a, double b,
                             std::span<const double> breaks = {}) const;

private:
    InitialDensity(InitialDensityId id, std::string name, std::function<double(double)> raw, double lower,
                   double upper);

    InitialDensityId id_;
    std::string name_;
    std::function<double(double)> raw_;
    double lower_;
    double upper_;
    double scale_ = 1.0;
};

/// The discrete LTP solution at t_n. Arrays are flat: positions N*d,
/// deformation and last_jacobian N*d*d (row-major per particle).
struct ParticleState {
    int dim = 1;
    double h = 0.0;
    std::size_t step = 0;
    double time = 0.0;
    ShapeFunction shape{ShapeFamily::B3};

    std::vector<double> positions;
    std::vector<double> origins;  // x_k^0 = k h
    std::vector<double> weights;
    std::vector<double> deformation;
    std::vector<double> volume;
    std::vector<double> last_jacobian;  // J_k^{n-1}; identity at n = 0
    std::vector<double> last_jdet;      // j_k^{n-1}; 1 at n = 0

    std::size_t size() const { return weights.size(); }
    std::size_t mat_size() const { return static_cast<std::size_t>(dim * dim); }

    std::span<const double> position(std::size_t k) const {
        return {positions.data() + k * dim, static_cast<std::size_t>(dim)};
    }
    std::span<const double> deformation_of(std::size_t k) const {
        return {deformation.data() + k * mat_size(), mat_size()};
    }
    double det_deformation(std::size_t k) const;
    double total_mass() const;

    /// Checks array sizes and positivity of volumes and determinants;
    /// throws NumericFailure on violation.
    void validate() const;
};

}  // namespace ltp
