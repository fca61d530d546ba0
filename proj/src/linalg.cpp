#include "ltp/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "ltp/errors.hpp"

namespace ltp::linalg {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const Mat>;
using MutMap = Eigen::Map<Mat>;

}  // namespace

double det(std::span<const double> m, int d) {
    if (d == 1) return m[0];
    if (d == 2) return m[0] * m[3] - m[1] * m[2];
    return ConstMap(m.data(), d, d).determinant();
}

double trace(std::span<const double> m, int d) {
    double t = 0.0;
    for (int i = 0; i < d; ++i) t += m[i * d + i];
    return t;
}

void inverse(std::span<const double> m, int d, std::span<double> out) {
    if (d == 1) {
        if (m[0] == 0.0) throw NumericFailure("singular 1x1 matrix");
        out[0] = 1.0 / m[0];
        return;
    }
    const auto lu = ConstMap(m.data(), d, d).fullPivLu();
    if (!lu.isInvertible()) throw NumericFailure("singular deformation matrix");
    MutMap(out.data(), d, d) = lu.inverse();
}

void multiply(std::span<const double> a, std::span<const double> b, int d, std::span<double> out) {
    if (d == 1) {
        out[0] = a[0] * b[0];
        return;
    }
    MutMap(out.data(), d, d) = ConstMap(a.data(), d, d) * ConstMap(b.data(), d, d);
}

void identity(int d, std::span<double> out) {
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out[i * d + j] = i == j ? 1.0 : 0.0;
}

void expm(std::span<const double> a, int d, std::span<double> out) {
    if (d == 1) {
        out[0] = std::exp(a[0]);
        return;
    }
    constexpr int q = 6;
    // c_j = (2q-j)! q! / ((2q)! j! (q-j)!)
    std::array<double, q + 1> c{};
    c[0] = 1.0;
    for (int j = 1; j <= q; ++j) c[j] = c[j - 1] * (q - j + 1) / (j * (2.0 * q - j + 1));

    const ConstMap A(a.data(), d, d);
    const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
    const Mat X = A / std::ldexp(1.0, squarings);

    Mat power = Mat::Identity(d, d);
    Mat num = c[0] * power;
    Mat den = c[0] * power;
    double sign = 1.0;
    for (int j = 1; j <= q; ++j) {
        power = power * X;
        sign = -sign;
        num += c[j] * power;
        den += sign * c[j] * power;
    }
    Mat e = den.partialPivLu().solve(num);
    for (int s = 0; s < squarings; ++s) e = e * e;
    MutMap(out.data(), d, d) = e;
}

}  // namespace ltp::linalg
