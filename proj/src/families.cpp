#include "steklov/families.hpp"

#include "steklov/parallel.hpp"
#include "steklov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace steklov {

WarpingFunction make_hdelta(const BaseDomain& base, double C, double delta) {
    if (!(C >= 1.0) || !std::isfinite(C)) throw std::invalid_argument("make_hdelta: requires C >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("make_hdelta: requires delta > 0");
    const double w = delta * delta;
    const double ext = base.extent();
    if (!(w < base.inradius()))
        throw std::invalid_argument("make_hdelta: delta^2 = " + std::to_string(w) + " must be below the inradius " +
                                    std::to_string(base.inradius()));
    if (base.is_interval()) {
        auto h = WarpingFunction::piecewise_linear({0.0, w, ext - w, ext}, {1.0, C, C, 1.0},
                                                   WarpingFunction::Preset::collar_bump);
        return h.with_refine_zones({{0.0, w, kCollarElements}, {ext - w, ext, kCollarElements}});
    }
    auto h = WarpingFunction::piecewise_linear({0.0, ext - w, ext}, {C, C, 1.0}, WarpingFunction::Preset::collar_bump);
    return h.with_refine_zones({{ext - w, ext, kCollarElements}});
}

double heps_peak(const BaseDomain& base, double p, double budget, double eps) {
    if (!(p >= 1.0)) throw std::invalid_argument("heps: requires p >= 1");
    if (!(budget > 0.0)) throw std::invalid_argument("heps: budget must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("heps: eps must be positive");
    return std::pow(budget / (2.0 * eps * boundary_area(base)), 1.0 / p);
}

WarpingFunction make_heps(const BaseDomain& base, const HepsParams& params) {
    if (!base.is_ball()) throw std::invalid_argument("make_heps: requires a ball base (connected boundary)");
    const double R = base.extent();
    const double eps = params.eps;
    const double P = heps_peak(base, params.p, params.budget, eps);
    if (!(3.0 * eps < R)) throw std::invalid_argument("make_heps: eps too large, the collar needs 3 eps < R");
    if (params.floor > 1.0)
        throw std::invalid_argument("make_heps: floor above the boundary value 1 cannot hold on [0, 2 eps]");
    if (!(P >= 1.0))
        throw std::invalid_argument("make_heps: infeasible budget, peak " + std::to_string(P) + " is below 1");
    const double logP = std::log(P);
    auto f = [R, eps, P, logP](double r) {
        const double s = R - r;
        if (s <= 0.0) return 1.0;
        if (s < eps) return std::exp(logP * s / eps);
        if (s <= 2.0 * eps) return P;
        if (s < 3.0 * eps) return std::exp(logP * (3.0 * eps - s) / eps);
        return 1.0;
    };
    auto h = WarpingFunction::piecewise_linear({0.0, R - 3.0 * eps, R - 2.0 * eps, R - eps, R}, {1.0, 1.0, P, P, 1.0},
                                               WarpingFunction::Preset::collar_bump)
                 .with_evaluator(f)
                 .with_refine_zones({{R - 3.0 * eps, R - 2.0 * eps, kCollarElements},
                                     {R - 2.0 * eps, R - eps, kCollarElements},
                                     {R - eps, R, kCollarElements}});
    const double total = weighted_volume_integral(base, h, params.p);
    if (total > params.budget * (1.0 + 1e-9))
        throw std::invalid_argument("make_heps: infeasible budget, integral of h^p is " + std::to_string(total) +
                                    " > " + std::to_string(params.budget));
    return h;
}

double heps_collar_integral(const BaseDomain& base, const WarpingFunction& h, const HepsParams& params) {
    const double R = base.extent();
    const double eps = params.eps;
    const Mesh mesh = adapted_mesh(base, kDefaultMeshElements, h);
    const BaseDomain line(Interval{R});
    // Product measure: integrate over r on the line, then multiply by |dOmega|.
    return boundary_area(base) *
           integrate_on_mesh(
               line, mesh, [&](double r) { return std::pow(h(r), params.p); }, 8, R - 2.0 * eps, R - eps);
}

SaturationTable saturation_sweep(const BaseDomain& base, const FiberSpectrum& fiber, int k,
                                 const std::vector<double>& constants, const std::vector<double>& deltas,
                                 const SolveSettings& settings, int workers) {
    if (fiber.dim() != 2) throw std::invalid_argument("saturation_sweep: requires n = 2");
    if (k < 1) throw std::invalid_argument("saturation_sweep: k must be >= 1");
    struct Cell {
        double C;
        double delta;
    };
    std::vector<Cell> cells;
    for (double C : constants)
        for (double d : deltas) cells.push_back({C, d});
    const int n = fiber.dim();
    const double ceil = fiber_lambda_k(fiber, k) * volume(base) / boundary_area(base);

    const auto rows = parallel_map(
        cells,
        [&](const Cell& c) {
            const auto h = make_hdelta(base, c.C, c.delta);
            const Mesh mesh = adapted_mesh(base, settings.mesh_elements, h);
            const auto sigma = sigma_k(steklov_spectrum(base, h, fiber, k, mesh, settings.spectrum), k);
            const auto hc = WarpingFunction::constant(c.C);
            const auto sc = sigma_k(steklov_spectrum(base, hc, fiber, k, mesh, settings.spectrum), k);
            return SaturationRow{c.C, c.delta, sigma, std::pow(c.C, n) * sc, ceil,
                                 mesh_tolerance(base, h, fiber, k, settings)};
        },
        workers);

    SaturationTable t;
    t.k = k;
    t.rows = rows;
    std::map<double, std::vector<SaturationRow>> by_c;
    for (const auto& r : rows) {
        if (!(r.sigma < r.ceiling) || !(r.limit < r.ceiling)) t.below_ceiling = false;
        by_c[r.C].push_back(r);
    }
    for (auto& [C, group] : by_c) {
        std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.delta > b.delta; });
        for (std::size_t i = 1; i < group.size(); ++i)
            if (group[i].sigma < group[i - 1].sigma - group[i].tol) t.monotone = false;
    }
    return t;
}

std::vector<double> default_eps_list(const BaseDomain& base) {
    std::vector<double> out;
    for (int e = 3; e <= 9; ++e) out.push_back(std::ldexp(base.inradius(), -e));
    return out;
}

BlowupTable blowup_sweep(const BaseDomain& base, const FiberSpectrum& fiber, double p, double budget,
                         const std::vector<double>& eps_list, const SolveSettings& settings, int workers,
                         double floor) {
    if (!base.is_ball()) throw std::invalid_argument("blowup_sweep: requires a ball base (connected boundary)");
    const int n = fiber.dim();
    if (!(p >= 1.0)) throw std::invalid_argument("blowup_sweep: requires p >= 1");
    if (!(p < n - 2)) throw std::invalid_argument("blowup_sweep: requires p < n - 2");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("blowup_sweep: eps list must decrease");

    BlowupTable t;
    t.p = p;
    t.budget = budget;
    t.ceiling = fiber_lambda_k(fiber, 1) * volume(base) / boundary_area(base);
    t.rows = parallel_map(
        eps_list,
        [&](double eps) {
            const HepsParams params{p, budget, eps, floor};
            const auto h = make_heps(base, params);
            const double integral = weighted_volume_integral(base, h, p, settings.mesh_elements);
            const double sigma = solve_sigma_k(base, h, fiber, 1, settings);
            return BlowupRow{eps, heps_peak(base, p, budget, eps), integral, sigma,
                             std::numeric_limits<double>::quiet_NaN()};
        },
        workers);
    t.min_growth = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto& r = t.rows[i];
        if (r.p_integral > budget * (1.0 + 1e-9)) t.within_budget = false;
        if (i == 0) continue;
        r.growth = r.sigma / t.rows[i - 1].sigma;
        t.min_growth = std::min(t.min_growth, r.growth);
        if (!(r.growth > 1.0)) t.strictly_growing = false;
    }
    if (t.rows.size() < 2) t.min_growth = std::numeric_limits<double>::quiet_NaN();
    return t;
}

ConformalReport conformal_check(double L, const WarpingFunction& h, const FiberSpectrum& circle, int K,
                                const SolveSettings& settings, double tol) {
    if (K < 2) throw std::invalid_argument("conformal_check: K must be >= 2");
    if (circle.kind() != FiberSpectrum::Kind::circle) throw std::invalid_argument("conformal_check: requires a circle fiber");
    const BaseDomain base(Interval{L});
    if (std::abs(h(0.0) - 1.0) > 1e-12 || std::abs(h(L) - 1.0) > 1e-12)
        throw std::invalid_argument("conformal_check: requires h(0) = h(L) = 1");
    const Mesh mesh = adapted_mesh(base, settings.mesh_elements, h);

    ConformalReport r;
    r.L = L;
    r.tol = tol;
    r.t_L = integrate_on_mesh(
        base, mesh, [&](double x) { return 1.0 / h(x); }, 8, 0.0, L);
    const BaseDomain flat_base(Interval{r.t_L});
    const auto one = WarpingFunction::constant(1.0);
    const auto warped = steklov_spectrum(base, h, circle, K - 1, mesh, settings.spectrum);
    const auto flat =
        steklov_spectrum(flat_base, one, circle, K - 1, uniform_mesh(flat_base, settings.mesh_elements),
                         settings.spectrum);
    r.pass = true;
    for (int k = 0; k < K; ++k) {
        const double a = sigma_k(warped, k);
        const double b = sigma_k(flat, k);
        r.warped.push_back(a);
        r.flat.push_back(b);
        const double err = (b == 0.0) ? std::abs(a) : std::abs(a - b) / std::abs(b);
        r.max_rel_error = std::max(r.max_rel_error, err);
    }
    r.pass = r.max_rel_error <= tol;
    return r;
}

}  // namespace steklov
