#pragma once

#include <span>

namespace steklov {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::span<const double> nodes;
    std::span<const double> weights;
};

inline constexpr int kMaxGaussPoints = 48;

/// Returns the cached n-point rule, 1 <= n <= kMaxGaussPoints. Thread-safe.
GaussRule gauss_legendre(int n);

/// Node count for integrating h^s against a polynomial weight of degree
/// `extra_degree` on one element: max(4, ceil((|s| + 3 + extra_degree) / 2)).
int gauss_points_for_power(double s, int extra_degree = 0);

}  // namespace steklov
