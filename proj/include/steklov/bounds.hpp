#pragma once

#include "steklov/geometry.hpp"
#include "steklov/report.hpp"
#include "steklov/spectrum.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace steklov {

struct SolveSettings {
    int mesh_elements = kDefaultMeshElements;
    /// Floor of every verdict tolerance.
    double min_tol = 1e-8;
    SpectrumOptions spectrum;
};

/// sigma_k(M_h) on the mesh adapted to h with settings.mesh_elements elements.
double solve_sigma_k(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k,
                     const SolveSettings& settings = {});

/// Verdict tolerance max(min_tol, 5 * e), with e the Richardson error estimate
/// |sigma_k(N) - sigma_k(N/2)| / 3 of the O(N^-2) discretisation.
double mesh_tolerance(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k,
                      const SolveSettings& settings = {});

/// lambda_k * int_Omega h^{n-2} / int_dOmega h^n.
double basic_bound_value(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k,
                         const SolveSettings& settings = {});

/// sigma_k(M_h) < lambda_k * int h^{n-2} dV / int_boundary h^n dA.
BoundReport bound_basic(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k,
                        const SolveSettings& settings = {});

/// sigma_k(M_h) < C^n sigma_k(M_C) < C^{n-2} lambda_k |Omega| / |dOmega|, both on the mesh adapted to h.
/// Requires h <= C, h = 1 on the boundary and C >= 1.
std::pair<BoundReport, BoundReport> bound_const_chain(const BaseDomain& base, const WarpingFunction& h,
                                                      const FiberSpectrum& fiber, int k, double C,
                                                      const SolveSettings& settings = {});

struct AsymptoticRow {
    double C;
    double sigma;
    /// C^2 sigma_k(M_C).
    double scaled;
    double limit;
    double deviation;
    /// Deviation over the previous row's deviation (NaN on the first row).
    double ratio;
};

struct AsymptoticTable {
    std::vector<AsymptoticRow> rows;
    bool deviations_decrease = true;
};

/// C^2 sigma_k(M_C) for an increasing list of constants C, against the limit lambda_k |Omega| / |dOmega|.
AsymptoticTable const_asymptotics(const BaseDomain& base, const FiberSpectrum& fiber, int k,
                                  const std::vector<double>& constants, const SolveSettings& settings = {},
                                  int workers = 1);

/// sigma_k(M_h) < lambda_k |Omega|^{(p-(n-2))/p} ||h||_p^{n-2} / |dOmega|, for n >= 3, n-2 <= p, h = 1 on the boundary.
BoundReport bound_lp(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k, double p,
                     const SolveSettings& settings = {});

struct IntervalBoundReports {
    BoundReport general;
    /// Present for k = 1 only.
    std::optional<BoundReport> first;
};

/// Interval-base bounds with constants 3^{n-2}/4 and 4 * 3^n. Both reports
/// are observational: recorded, never gating.
IntervalBoundReports bound_interval(const WarpingFunction& h, const FiberSpectrum& fiber, int k, double p, double L,
                                    const SolveSettings& settings = {});

struct StabilityReport {
    double sigma = 0.0;
    /// lambda_k |Omega| / |dOmega| - sigma_k(M_h).
    double deficit = 0.0;
    double q = 0.0;
    double r = 0.0;
    /// Integral of h^2 over B(q, r).
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    bool pass = false;
    /// rhs < 0: the estimate holds for any h.
    bool trivial = false;
};

/// Quantitative stability estimate for n = 2 on the ball B(q, r) inside the base
/// (interval: [q-r, q+r]; ball base: q must be the centre 0).
StabilityReport stability_report(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k,
                                 double q, double r, const SolveSettings& settings = {});

/// Ball B(q, r) of the base; for a ball base only the centre q = 0 is supported.
struct Subdomain {
    double centre;
    double radius;
};

/// Nonnegative trial profile supported in a subdomain, with |df|.
struct TrialProfile {
    std::function<double(double)> value;
    std::function<double(double)> gradient_norm;
    /// Coordinates where f is not smooth; inserted as mesh nodes.
    std::vector<double> kinks;
};

/// f(x) = dist(x, boundary of D), so |df| = 1 and f <= radius.
TrialProfile distance_profile(const BaseDomain& base, const Subdomain& D);

struct ImprovedBound {
    BoundReport report;
    /// Minimiser of R(1 - t f) over t.
    double t0 = 0.0;
    double basic_rhs = 0.0;
    /// basic_rhs - report.rhs, always >= 0.
    double correction = 0.0;
};

/// Bound from the trial function 1 - t0 f on top of the constant trial function.
ImprovedBound improved_bound(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber, int k,
                             const Subdomain& D, const TrialProfile& f, const SolveSettings& settings = {});

/// d/dmu sigma_{mu,0} at mu = 0 for h = 1 (Helmholtz-Steklov problem), by
/// Richardson extrapolation of sigma(mu)/mu at mu in {eps, 2 eps, 4 eps}.
double helmholtz_slope(const BaseDomain& base, int mesh_elements = kDefaultMeshElements, double eps = 1e-3);

}  // namespace steklov
