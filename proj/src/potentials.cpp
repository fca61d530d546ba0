#include "ltp/potentials.hpp"

#include <algorithm>
#include <sstream>

#include "ltp/errors.hpp"

namespace ltp {

namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12 && std::abs(x) < 64.0; }

PowerTerm make_term(double coef, double power) {
    return PowerTerm{coef, power, FastPow(power - 1.0), FastPow(power - 2.0)};
}

}  // namespace

FastPow::FastPow(double exponent) : e_(exponent) {
    if (is_integer(exponent)) {
        mode_ = Mode::Integer;
        k_ = static_cast<int>(std::lround(exponent));
    } else if (is_integer(exponent - 0.5)) {
        mode_ = Mode::Half;
        k_ = static_cast<int>(std::lround(exponent - 0.5));
    }
}

PotentialKind parse_potential_kind(std::string_view name) {
    if (name == "quadratic") return PotentialKind::Quadratic;
    if (name == "power") return PotentialKind::PowerAttractive;
    if (name == "repattr") return PotentialKind::PowerRepAttr;
    throw ConfigError("unknown potential.kind '" + std::string(name) +
                      "' (expected quadratic, power or repattr)");
}

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::Quadratic: return "quadratic";
        case PotentialKind::PowerAttractive: return "power";
        case PotentialKind::PowerRepAttr: return "repattr";
    }
    return "unknown";
}

Potential::Potential(PotentialKind kind, double a, double b, int dim, std::vector<PowerTerm> terms)
    : kind_(kind), a_(a), b_(b), dim_(dim), terms_(std::move(terms)) {
    if (dim_ < 1) throw UnsupportedPotential("potential dimension must be >= 1");
    polynomial_ = std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) {
        return is_integer(t.power) && std::lround(t.power) % 2 == 0 && t.power >= 2.0;
    });
    hess_singular_ = std::any_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.power < 2.0; });
    grad_singular_ = std::any_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.power < 1.0; });
}

Potential Potential::quadratic(int dim) {
    return Potential(PotentialKind::Quadratic, 2.0, 0.0, dim, {make_term(1.0, 2.0)});
}

Potential Potential::power_attractive(double a, int dim) {
    if (!(a > 0.0) || !std::isfinite(a)) throw UnsupportedPotential("power potential needs a > 0");
    return Potential(PotentialKind::PowerAttractive, a, 0.0, dim, {make_term(1.0 / a, a)});
}

Potential Potential::power_rep_attr(double a, double b, int dim) {
    if (!(b > 1.0 && a > b) || !std::isfinite(a))
        throw UnsupportedPotential("repulsive-attractive potential needs 1 < b < a");
    return Potential(PotentialKind::PowerRepAttr, a, b, dim, {make_term(1.0 / a, a), make_term(-1.0 / b, b)});
}

Potential Potential::make(PotentialKind kind, double a, double b, int dim) {
    switch (kind) {
        case PotentialKind::Quadratic: return quadratic(dim);
        case PotentialKind::PowerAttractive: return power_attractive(a, dim);
        case PotentialKind::PowerRepAttr: return power_rep_attr(a, b, dim);
    }
    throw UnsupportedPotential("unknown potential kind");
}

std::string Potential::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ != PotentialKind::Quadratic) os << " a=" << a_;
    if (kind_ == PotentialKind::PowerRepAttr) os << " b=" << b_;
    return os.str();
}

Classification Potential::classify() const {
    if (!hess_singular_) return {false, 0.0};
    double alpha = -1e300;
    for (const auto& t : terms_) alpha = std::max(alpha, 1.0 - t.power);
    if (alpha < -1.0 || alpha >= static_cast<double>(dim_ - 1)) {
        std::ostringstream os;
        os << "potential " << describe() << " has singular exponent alpha=" << alpha
           << " outside [-1, " << dim_ - 1 << ")";
        throw UnsupportedPotential(os.str());
    }
    return {true, alpha};
}

double Potential::singular_constant(double radius) const {
    const Classification c = classify();
    const double alpha = c.singular ? c.alpha : 0.0;
    double lg = 0.0;
    double lh = 0.0;
    for (const auto& t : terms_) {
        const double e = t.power - 1.0 + alpha;
        const double grow = std::max(1.0, std::pow(radius, e));
        lh += std::abs(t.coef * t.power * (t.power - 1.0)) * grow;
        if (alpha < 0.0)
            lg += std::abs(t.coef * t.power) * std::max(1.0, std::pow(radius, t.power - 1.0));
        else
            lg += std::abs(t.coef * t.power) * grow;
    }
    return std::max(lg, lh);
}

double Potential::value(double r) const {
    double w = 0.0;
    for (const auto& t : terms_) w += t.coef * std::pow(std::abs(r), t.power);
    return w;
}

double Potential::grad_1d(double x) const {
    if (x == 0.0) {
        if (grad_singular_) throw SingularityError("grad W is singular at the origin");
        return 0.0;
    }
    double g = 0.0;
    double h = 0.0;
    grad_hess_1d(x, g, h);
    return g;
}

double Potential::hess_1d(double x) const {
    if (x == 0.0 && hess_singular_) throw SingularityError("D^2 W is singular at the origin");
    double g = 0.0;
    double h = 0.0;
    grad_hess_1d(x, g, h);
    return h;
}

void Potential::radial_derivatives(double r, double& w1, double& w2) const {
    w1 = 0.0;
    w2 = 0.0;
    for (const auto& t : terms_) {
        const double cp = t.coef * t.power;
        w1 += cp * t.d1(r);
        w2 += cp * (t.power - 1.0) * t.d2(r);
    }
}

bool Potential::grad_hess(std::span<const double> x, std::span<double> g, std::span<double> hs) const {
    const int d = dim_;
    if (d == 1) {
        if (x[0] == 0.0 && hess_singular_) return false;
        grad_hess_1d(x[0], g[0], hs[0]);
        return true;
    }
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    const double r = std::sqrt(r2);
    if (r == 0.0) {
        if (hess_singular_) return false;
        double c2 = 0.0;
        for (const auto& t : terms_)
            if (t.power == 2.0) c2 += 2.0 * t.coef;
        for (int i = 0; i < d; ++i) {
            g[i] = 0.0;
            for (int j = 0; j < d; ++j) hs[i * d + j] = i == j ? c2 : 0.0;
        }
        return true;
    }
    double w1 = 0.0;
    double w2 = 0.0;
    radial_derivatives(r, w1, w2);
    const double w1r = w1 / r;
    for (int i = 0; i < d; ++i) {
        const double ui = x[i] / r;
        g[i] = w1 * ui;
        for (int j = 0; j < d; ++j) {
            const double uj = x[j] / r;
            hs[i * d + j] = (w2 - w1r) * ui * uj + (i == j ? w1r : 0.0);
        }
    }
    return true;
}

void Potential::grad(std::span<const double> x, std::span<double> out) const {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    if (r2 == 0.0) {
        if (grad_singular_) throw SingularityError("grad W is singular at the origin");
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    std::vector<double> h(static_cast<std::size_t>(dim_ * dim_));
    grad_hess(x, out, h);
}

void Potential::hess(std::span<const double> x, std::span<double> out) const {
    std::vector<double> g(static_cast<std::size_t>(dim_));
    if (!grad_hess(x, g, out)) throw SingularityError("D^2 W is singular at the origin");
}

double Potential::lap(std::span<const double> x) const {
    std::vector<double> h(static_cast<std::size_t>(dim_ * dim_));
    hess(x, h);
    double tr = 0.0;
    for (int i = 0; i < dim_; ++i) tr += h[i * dim_ + i];
    return tr;
}

}  // namespace ltp
