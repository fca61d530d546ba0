#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

namespace ltp {

/// Exact rational number used to tabulate spline coefficients.
struct Rational {
    long num;
    long den = 1;
    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// One polynomial segment on [lo, hi], coefficients in ascending powers of z.
struct PolynomialPiece {
    double lo;
    double hi;
    std::vector<double> coeffs;

    double operator()(double z) const;
    /// Exact integral over [a, b] via the antiderivative.
    double integral(double a, double b) const;
    double integral() const { return integral(lo, hi); }
};

/// Compactly supported piecewise polynomial on the real line. Pieces are
/// contiguous and sorted; the function is zero outside [lower(), upper()].
class PiecewisePolynomial {
public:
    PiecewisePolynomial() = default;
    explicit PiecewisePolynomial(std::vector<PolynomialPiece> pieces);

    double operator()(double z) const;
    std::span<const PolynomialPiece> pieces() const { return pieces_; }
    double lower() const { return pieces_.front().lo; }
    double upper() const { return pieces_.back().hi; }
    double integral() const;

private:
    std::vector<PolynomialPiece> pieces_;
};

/// Exact integral of f(z) * g(z - shift) over the real line. Both factors are
/// split at the union of their breakpoints and each product polynomial is
/// integrated with a Gauss rule of sufficient degree.
double integrate_product(const PiecewisePolynomial& f, const PiecewisePolynomial& g, double shift);

enum class ShapeFamily { B1, B3 };

ShapeFamily parse_shape_family(std::string_view name);
std::string_view to_string(ShapeFamily family);

/// Integration kernel biorthogonal to the B1 hat:
/// 3/2 on (-1/2, 1/2), -1/2 on (-1, -1/2) and (1/2, 1).
class DualKernel {
public:
    DualKernel();

    double operator()(double z) const {
        const double a = std::abs(z);
        if (a < 0.5) return 1.5;
        if (a < 1.0) return -0.5;
        return 0.0;
    }
    /// Tensor product over coordinates.
    double eval(std::span<const double> z) const;
    const PiecewisePolynomial& profile() const { return profile_; }
    double support_radius() const { return 1.0; }

private:
    PiecewisePolynomial profile_;
};

/// Reference particle shape: B1 hat or B3 cubic spline, tensor product in d > 1.
class ShapeFunction {
public:
    explicit ShapeFunction(ShapeFamily family = ShapeFamily::B3);

    ShapeFamily family() const { return family_; }
    double support_radius() const { return family_ == ShapeFamily::B1 ? 1.0 : 2.0; }
    bool dual_available() const { return family_ == ShapeFamily::B1; }

    /// 1D profile.
    double operator()(double z) const {
        const double a = std::abs(z);
        if (family_ == ShapeFamily::B1) return a < 1.0 ? 1.0 - a : 0.0;
        if (a < 1.0) return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
        if (a < 2.0) {
            const double r = 2.0 - a;
            return r * r * r / 6.0;
        }
        return 0.0;
    }
    double eval(std::span<const double> z) const;

    const PiecewisePolynomial& profile() const { return profile_; }

    /// Throws UnsupportedFeature for B3.
    DualKernel dual() const;

private:
    ShapeFamily family_;
    PiecewisePolynomial profile_;
};

}  // namespace ltp
