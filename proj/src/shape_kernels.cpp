#include "ltp/shape_kernels.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ltp/errors.hpp"
#include "ltp/quadrature.hpp"

namespace ltp {

double PolynomialPiece::operator()(double z) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double PolynomialPiece::integral(double a, double b) const {
    double fa = 0.0;
    double fb = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        const double c = coeffs[i] / static_cast<double>(i + 1);
        fa = fa * a + c;
        fb = fb * b + c;
    }
    return fb * b - fa * a;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<PolynomialPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("piecewise polynomial needs at least one piece");
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        if (pieces_[i].lo != pieces_[i - 1].hi)
            throw std::invalid_argument("piecewise polynomial pieces must be contiguous");
}

double PiecewisePolynomial::operator()(double z) const {
    if (z < lower() || z >= upper()) return 0.0;
    for (const auto& p : pieces_)
        if (z < p.hi) return p(z);
    return 0.0;
}

double PiecewisePolynomial::integral() const {
    double s = 0.0;
    for (const auto& p : pieces_) s += p.integral();
    return s;
}

double integrate_product(const PiecewisePolynomial& f, const PiecewisePolynomial& g, double shift) {
    const double lo = std::max(f.lower(), g.lower() + shift);
    const double hi = std::min(f.upper(), g.upper() + shift);
    if (!(hi > lo)) return 0.0;

    std::vector<double> breaks{lo, hi};
    for (const auto& p : f.pieces()) breaks.push_back(p.lo);
    for (const auto& p : g.pieces()) breaks.push_back(p.lo + shift);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::size_t degree = 0;
    for (const auto& p : f.pieces()) degree = std::max(degree, p.coeffs.size());
    std::size_t gdeg = 0;
    for (const auto& p : g.pieces()) gdeg = std::max(gdeg, p.coeffs.size());
    degree += gdeg;  // (deg f + 1) + (deg g + 1) >= deg(fg) + 2
    const GaussLegendre gl(static_cast<int>(degree / 2 + 1));

    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (a < lo || b > hi || !(b > a)) continue;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (int q = 0; q < gl.size(); ++q) {
            const double z = mid + half * gl.nodes[q];
            sum += half * gl.weights[q] * f(z) * g(z - shift);
        }
    }
    return sum;
}

ShapeFamily parse_shape_family(std::string_view name) {
    if (name == "B1" || name == "b1") return ShapeFamily::B1;
    if (name == "B3" || name == "b3") return ShapeFamily::B3;
    throw ConfigError("unknown shape family '" + std::string(name) + "' (expected B1 or B3)");
}

std::string_view to_string(ShapeFamily family) {
    return family == ShapeFamily::B1 ? "B1" : "B3";
}

namespace {

PolynomialPiece make_piece(double lo, double hi, std::initializer_list<Rational> coeffs) {
    PolynomialPiece p{lo, hi, {}};
    for (const auto& c : coeffs) p.coeffs.push_back(c.value());
    return p;
}

PiecewisePolynomial b1_profile() {
    return PiecewisePolynomial({
        make_piece(-1.0, 0.0, {{1}, {1}}),
        make_piece(0.0, 1.0, {{1}, {-1}}),
    });
}

PiecewisePolynomial b3_profile() {
    return PiecewisePolynomial({
        make_piece(-2.0, -1.0, {{8, 6}, {12, 6}, {6, 6}, {1, 6}}),
        make_piece(-1.0, 0.0, {{4, 6}, {0}, {-6, 6}, {-3, 6}}),
        make_piece(0.0, 1.0, {{4, 6}, {0}, {-6, 6}, {3, 6}}),
        make_piece(1.0, 2.0, {{8, 6}, {-12, 6}, {6, 6}, {-1, 6}}),
    });
}

}  // namespace

DualKernel::DualKernel()
    : profile_({
          make_piece(-1.0, -0.5, {{-1, 2}}),
          make_piece(-0.5, 0.5, {{3, 2}}),
          make_piece(0.5, 1.0, {{-1, 2}}),
      }) {}

double DualKernel::eval(std::span<const double> z) const {
    double v = 1.0;
    for (double zi : z) v *= (*this)(zi);
    return v;
}

ShapeFunction::ShapeFunction(ShapeFamily family)
    : family_(family), profile_(family == ShapeFamily::B1 ? b1_profile() : b3_profile()) {}

double ShapeFunction::eval(std::span<const double> z) const {
    double v = 1.0;
    for (double zi : z) {
        v *= (*this)(zi);
        if (v == 0.0) break;
    }
    return v;
}

DualKernel ShapeFunction::dual() const {
    if (!dual_available())
        throw UnsupportedFeature("no compactly supported dual kernel is provided for the B3 shape; "
                                 "use cell_average weights");
    return DualKernel{};
}

}  // namespace ltp
