#include "ltp/particle_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltp/errors.hpp"
#include "ltp/linalg.hpp"
#include "ltp/quadrature.hpp"

namespace ltp {

InitialDensityId parse_initial_density(std::string_view name) {
    if (name == "rho1") return InitialDensityId::Rho1Gaussians;
    if (name == "rho2") return InitialDensityId::Rho2Indicator;
    if (name == "rho3") return InitialDensityId::Rho3Bump;
    throw ConfigError("unknown initial density '" + std::string(name) + "' (expected rho1, rho2 or rho3)");
}

std::string_view to_string(InitialDensityId id) {
    switch (id) {
        case InitialDensityId::Rho1Gaussians: return "rho1";
        case InitialDensityId::Rho2Indicator: return "rho2";
        case InitialDensityId::Rho3Bump: return "rho3";
        case InitialDensityId::Custom: return "custom";
    }
    return "unknown";
}

InitialDensity::InitialDensity(InitialDensityId id, std::string name, std::function<double(double)> raw,
                               double lower, double upper)
    : id_(id), name_(std::move(name)), raw_(std::move(raw)), lower_(lower), upper_(upper) {
    if (!(upper_ > lower_)) throw ConfigError("initial density has empty support");
    const double mass = integrate_adaptive(raw_, lower_, upper_);
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("initial density has no positive mass");
    scale_ = 1.0 / mass;
}

InitialDensity InitialDensity::rho1() {
    return {InitialDensityId::Rho1Gaussians, "rho1",
            [](double x) {
                const double a = x - 0.5;
                const double b = x + 0.3;
                return std::exp(-30.0 * a * a) + 2.0 * std::exp(-50.0 * b * b);
            },
            -1.0, 1.0};
}

InitialDensity InitialDensity::rho2() {
    return {InitialDensityId::Rho2Indicator, "rho2", [](double) { return 1.0; }, -1.0, 1.0};
}

InitialDensity InitialDensity::rho3() {
    return {InitialDensityId::Rho3Bump, "rho3",
            [](double x) {
                const double q = x * x - 1.0;
                return q < 0.0 ? std::exp(1.0 / q) : 0.0;
            },
            -1.0, 1.0};
}

InitialDensity InitialDensity::make(InitialDensityId id) {
    switch (id) {
        case InitialDensityId::Rho1Gaussians: return rho1();
        case InitialDensityId::Rho2Indicator: return rho2();
        case InitialDensityId::Rho3Bump: return rho3();
        case InitialDensityId::Custom: break;
    }
    throw ConfigError("custom initial densities must be built with InitialDensity::custom");
}

InitialDensity InitialDensity::custom(std::function<double(double)> profile, double lower, double upper,
                                      std::string name) {
    return {InitialDensityId::Custom, std::move(name), std::move(profile), lower, upper};
}

double InitialDensity::eval(std::span<const double> x) const {
    double v = 1.0;
    for (double xi : x) {
        v *= (*this)(xi);
        if (v == 0.0) break;
    }
    return v;
}

double InitialDensity::integral(double a, double b) const {
    const double lo = std::max(a, lower_);
    const double hi = std::min(b, upper_);
    if (!(hi > lo)) return 0.0;
    return scale_ * integrate_adaptive(raw_, lo, hi);
}

double InitialDensity::integral_weighted(const std::function<double(double)>& g, double a, double b,
                                         std::span<const double> breaks) const {
    const double lo = std::max(a, lower_);
    const double hi = std::min(b, upper_);
    if (!(hi > lo)) return 0.0;
    std::vector<double> cuts{lo, hi};
    for (double c : breaks)
        if (c > lo && c < hi) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        sum += integrate_adaptive([&](double x) { return raw_(x) * g(x); }, cuts[i], cuts[i + 1]);
    }
    return scale_ * sum;
}

double ParticleState::det_deformation(std::size_t k) const {
    return linalg::det(deformation_of(k), dim);
}

double ParticleState::total_mass() const {
    double m = 0.0;
    for (double w : weights) m += w;
    return m;
}

void ParticleState::validate() const {
    const std::size_t n = size();
    const std::size_t d = static_cast<std::size_t>(dim);
    if (dim < 1 || !(h > 0.0)) throw NumericFailure("particle state has invalid dimension or h");
    if (positions.size() != n * d || origins.size() != n * d || deformation.size() != n * d * d ||
        volume.size() != n || last_jacobian.size() != n * d * d || last_jdet.size() != n)
        throw NumericFailure("particle state arrays have inconsistent sizes");
    for (std::size_t k = 0; k < n; ++k) {
        if (!(volume[k] > 0.0) || !std::isfinite(volume[k])) {
            std::ostringstream os;
            os << "particle " << k << " has non-positive volume " << volume[k];
            throw NumericFailure(os.str());
        }
        if (!(det_deformation(k) > 0.0)) {
            std::ostringstream os;
            os << "particle " << k << " has non-positive deformation determinant";
            throw NumericFailure(os.str());
        }
    }
}

}  // namespace ltp
