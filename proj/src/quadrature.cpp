#include "steklov/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace steklov {
namespace {

struct RuleTable {
    std::array<std::vector<double>, kMaxGaussPoints + 1> nodes;
    std::array<std::vector<double>, kMaxGaussPoints + 1> weights;

    RuleTable() {
        for (int n = 1; n <= kMaxGaussPoints; ++n) build(n);
    }

    // Newton iteration on P_n from the Chebyshev initial guess.
    void build(int n) {
        auto& x = nodes[n];
        auto& w = weights[n];
        x.assign(n, 0.0);
        w.assign(n, 0.0);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                if (n == 1) p0 = 1.0;
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            // recompute the derivative at the converged root
            {
                double p0 = 1.0;
                double p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = (n == 1) ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
            }
            const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        if (n % 2 == 1) x[n / 2] = 0.0;
    }
};

const RuleTable& table() {
    static const RuleTable t;
    return t;
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1 || n > kMaxGaussPoints) throw std::out_of_range("gauss_legendre: unsupported point count");
    const auto& t = table();
    return {t.nodes[n], t.weights[n]};
}

int gauss_points_for_power(double s, int extra_degree) {
    const int n = static_cast<int>(std::ceil((std::abs(s) + 3.0 + extra_degree) / 2.0));
    return std::min(kMaxGaussPoints, std::max(4, n));
}

}  // namespace steklov
