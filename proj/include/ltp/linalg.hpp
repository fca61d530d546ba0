#pragma once

#include <span>

// Small dense d x d matrices stored row-major in flat spans.
namespace ltp::linalg {

double det(std::span<const double> m, int d);
double trace(std::span<const double> m, int d);
void inverse(std::span<const double> m, int d, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, int d, std::span<double> out);
void identity(int d, std::span<double> out);

/// exp(A) by scaling and squaring with the diagonal (6,6) Pade approximant.
void expm(std::span<const double> a, int d, std::span<double> out);

}  // namespace ltp::linalg
