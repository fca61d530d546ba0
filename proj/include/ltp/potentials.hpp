#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltp {

enum class PotentialKind { Quadratic, PowerAttractive, PowerRepAttr };

PotentialKind parse_potential_kind(std::string_view name);
std::string_view to_string(PotentialKind kind);

/// Smooth means D^2 W is locally bounded; otherwise D^2 W ~ |x|^-(1+alpha).
struct Classification {
    bool singular = false;
    double alpha = 0.0;
};

/// r^e with cheap paths for integer and half-integer exponents.
class FastPow {
public:
    FastPow() = default;
    explicit FastPow(double exponent);

    double operator()(double r) const {
        switch (mode_) {
            case Mode::Integer: return ipow(r, k_);
            case Mode::Half: return std::sqrt(r) * ipow(r, k_);
            case Mode::General: break;
        }
        return std::pow(r, e_);
    }
    double exponent() const { return e_; }

private:
    static double ipow(double r, int k) {
        if (k < 0) return 1.0 / ipow(r, -k);
        double acc = 1.0;
        for (int i = 0; i < k; ++i) acc *= r;
        return acc;
    }
    enum class Mode { Integer, Half, General };
    Mode mode_ = Mode::General;
    int k_ = 0;
    double e_ = 0.0;
};

/// One radial term coef * r^power of W.
struct PowerTerm {
    double coef;
    double power;
    FastPow d1;  // r^(power-1)
    FastPow d2;  // r^(power-2)
};

/// Even radial interaction potential W(x) = sum_i coef_i |x|^p_i:
///   Quadratic        W = |x|^2
///   PowerAttractive  W = |x|^a / a
///   PowerRepAttr     W = |x|^a / a - |x|^b / b,  1 < b < a
class Potential {
public:
    static Potential quadratic(int dim = 1);
    static Potential power_attractive(double a, int dim = 1);
    static Potential power_rep_attr(double a, double b, int dim = 1);
    static Potential make(PotentialKind kind, double a, double b, int dim = 1);

    PotentialKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    int dim() const { return dim_; }
    std::span<const PowerTerm> terms() const { return terms_; }
    std::string describe() const;

    /// Throws UnsupportedPotential when singular with alpha outside [-1, d-1).
    Classification classify() const;
    /// Constant L~ of the singular bounds on 0 < |x| <= radius.
    double singular_constant(double radius = 2.0) const;

    /// True when every power is an even integer, i.e. the kernels are polynomials.
    bool polynomial_kernel() const { return polynomial_; }
    /// True when D^2 W is unbounded at the origin.
    bool hessian_singular() const { return hess_singular_; }
    /// True when grad W is unbounded at the origin (alpha > 0).
    bool gradient_singular() const { return grad_singular_; }

    double value(double r) const;

    // 1D evaluators; throw SingularityError at a non-removable singularity.
    double grad_1d(double x) const;
    double hess_1d(double x) const;

    /// Unchecked 1D hot path: g = W'(v), hs = W''(v).
    void grad_hess_1d(double v, double& g, double& hs) const {
        const double r = std::abs(v);
        const double s = static_cast<double>((v > 0.0) - (v < 0.0));
        double gr = 0.0;
        double hr = 0.0;
        for (const auto& t : terms_) {
            const double cp = t.coef * t.power;
            gr += cp * t.d1(r);
            hr += cp * (t.power - 1.0) * t.d2(r);
        }
        g = s * gr;
        hs = hr;
    }

    // d-dimensional evaluators; out has d (grad) or d*d (hess, row-major) entries.
    void grad(std::span<const double> x, std::span<double> out) const;
    void hess(std::span<const double> x, std::span<double> out) const;
    double lap(std::span<const double> x) const;

    /// Unchecked d-dimensional hot path; returns false at an exact singularity.
    bool grad_hess(std::span<const double> x, std::span<double> g, std::span<double> hs) const;

private:
    Potential(PotentialKind kind, double a, double b, int dim, std::vector<PowerTerm> terms);
    void radial_derivatives(double r, double& w1, double& w2) const;

    PotentialKind kind_;
    double a_;
    double b_;
    int dim_;
    std::vector<PowerTerm> terms_;
    bool polynomial_ = false;
    bool hess_singular_ = false;
    bool grad_singular_ = false;
};

}  // namespace ltp
