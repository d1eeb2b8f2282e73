#pragma once

#include "steklov/bounds.hpp"
#include "steklov/geometry.hpp"

#include <vector>

namespace steklov {

/// Elements placed inside every collar of a family member.
inline constexpr int kCollarElements = 64;

/// h = 1 on the boundary, C at distance >= delta^2 from it, linear in between.
WarpingFunction make_hdelta(const BaseDomain& base, double C, double delta);

struct HepsParams {
    double p;
    /// Upper bound on the integral of h^p over the base.
    double budget;
    double eps;
    double floor = 1.0;
};

/// (budget / (2 eps |dOmega|))^{1/p}.
double heps_peak(const BaseDomain& base, double p, double budget, double eps);

/// Radial collar profile on a ball, in terms of the distance s = R - r to the boundary:
/// geometric rise from 1 to the peak on [0, eps], the peak on [eps, 2 eps],
/// geometric decay back to 1 on [2 eps, 3 eps], and 1 further inland.
WarpingFunction make_heps(const BaseDomain& base, const HepsParams& params);

/// Integral of h^p over the band [eps, 2 eps] measured as dOmega x [eps, 2 eps].
double heps_collar_integral(const BaseDomain& base, const WarpingFunction& h, const HepsParams& params);

struct SaturationRow {
    double C;
    double delta;
    double sigma;
    /// C^n sigma_k(M_C) on the member's mesh.
    double limit;
    /// lambda_k |Omega| / |dOmega|.
    double ceiling;
    double tol;
};

struct SaturationTable {
    int k = 1;
    std::vector<SaturationRow> rows;
    /// Along every C, sigma does not decrease (within tol) as delta shrinks.
    bool monotone = true;
    /// Every sigma and every limit lies strictly below the ceiling.
    bool below_ceiling = true;
};

/// sigma_k(M_{h_delta}) over the (C, delta) grid; rows are ordered by C then by delta as given.
SaturationTable saturation_sweep(const BaseDomain& base, const FiberSpectrum& fiber, int k,
                                 const std::vector<double>& constants, const std::vector<double>& deltas,
                                 const SolveSettings& settings = {}, int workers = 1);

struct BlowupRow {
    double eps;
    double peak;
    double p_integral;
    double sigma;
    /// sigma over the previous row's sigma (NaN on the first row).
    double growth;
};

struct BlowupTable {
    double p = 1.0;
    double budget = 0.0;
    /// lambda_1 |Omega| / |dOmega|, the supremum when n = 2.
    double ceiling = 0.0;
    std::vector<BlowupRow> rows;
    bool within_budget = true;
    bool strictly_growing = true;
    double min_growth = 0.0;
};

/// eps list 2^{-3} .. 2^{-9} times the inradius.
std::vector<double> default_eps_list(const BaseDomain& base);

/// sigma_1(M_{h_eps}) for a decreasing eps list under a fixed L^p budget.
/// Requires a ball base and p < n - 2.
BlowupTable blowup_sweep(const BaseDomain& base, const FiberSpectrum& fiber, double p, double budget,
                         const std::vector<double>& eps_list, const SolveSettings& settings = {}, int workers = 1,
                         double floor = 1.0);

struct ConformalReport {
    double L = 0.0;
    /// Integral of 1/h over [0, L].
    double t_L = 0.0;
    std::vector<double> warped;
    std::vector<double> flat;
    double max_rel_error = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Compares the first K eigenvalues of [0, L] x_h S^1(rho) and [0, t(L)] x S^1(rho).
ConformalReport conformal_check(double L, const WarpingFunction& h, const FiberSpectrum& circle, int K,
                                const SolveSettings& settings = {}, double tol = 1e-4);

}  // namespace steklov
