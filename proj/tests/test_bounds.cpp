#include "doctest.h"
#include "oracles.hpp"

#include "steklov/bounds.hpp"
#include "steklov/families.hpp"
#include "steklov/report_io.hpp"
#include "steklov/sturm.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace steklov;
using doctest::Approx;

namespace {
const double kCyl = std::sqrt(2.0) * std::tanh(std::sqrt(2.0) / 2);
}

TEST_CASE("report verdicts") {
    CHECK(make_report("x", 1, 1.0, 2.0, true, 0.0).pass);
    CHECK(make_report("x", 1, 1.0, 2.0, true, 0.0).margin == 1.0);
    CHECK_FALSE(make_report("x", 1, 2.0, 2.0, true, 0.0).pass);
    CHECK(make_report("x", 1, 2.0, 2.0, false, 0.0).pass);
    CHECK(make_report("x", 1, 2.0, 2.0, true, 1e-9).pass);
    const auto j = to_json(make_report("basic", 2, 0.5, 1.0, true, 1e-8, "n"));
    CHECK(j["verdict"] == "pass");
    CHECK(j["margin"] == 0.5);
    CHECK(j["note"] == "n");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-2.5e-20) == "-2.5e-20");
}

TEST_CASE("basic bound on the unit cylinder") {
    const BaseDomain iv(Interval{1.0});
    const auto r = bound_basic(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1);
    CHECK(r.rhs == Approx(1.0).epsilon(1e-14));
    CHECK(r.lhs == Approx(kCyl).epsilon(1e-6));
    CHECK(r.strict);
    CHECK(r.pass);
    CHECK(r.margin > r.tol);
    const auto r0 = bound_basic(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 0);
    CHECK(r0.lhs == 0.0);
    CHECK(r0.pass);
}

TEST_CASE("basic bound rhs ignores interior h when n = 2") {
    std::mt19937_64 rng(1);
    for (const BaseDomain& base : {BaseDomain(Interval{1.0}), BaseDomain(Ball{2, 1.0}), BaseDomain(Ball{3, 2.0})}) {
        for (int t = 0; t < 5; ++t) {
            const auto h = oracle::random_pl(rng, base);
            for (int k = 1; k <= 4; ++k) {
                const double lam = fiber_lambda_k(FiberSpectrum::sphere(2), k);
                CHECK(basic_bound_value(base, h, FiberSpectrum::sphere(2), k) ==
                      Approx(lam * volume(base) / boundary_area(base)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("constant chain") {
    const BaseDomain iv(Interval{1.0});
    const auto s3 = FiberSpectrum::sphere(3);
    const auto h = make_hdelta(iv, 4.0, 0.3);
    const auto [a, b] = bound_const_chain(iv, h, s3, 1, 4.0);
    // lambda_1(S^3) = 3: C^{n-2} lambda |Omega| / |dOmega| = 4 * 3 / 2.
    CHECK(b.rhs == Approx(6.0).epsilon(1e-14));
    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(a.margin > a.tol);
    CHECK(b.margin > b.tol);
    CHECK(a.rhs == b.lhs);

    const auto [e1, e2] = bound_const_chain(iv, WarpingFunction::constant(1.0), s3, 1, 1.0);
    CHECK_FALSE(e1.strict);
    CHECK_FALSE(e1.note.empty());
    CHECK(e1.pass);
    CHECK(e2.pass);

    CHECK_THROWS(bound_const_chain(iv, h, s3, 1, 2.0));
    CHECK_THROWS(bound_const_chain(iv, WarpingFunction::constant(2.0), s3, 1, 2.0));
    CHECK_THROWS(bound_const_chain(iv, h, s3, 1, 0.5));
}

TEST_CASE("constant asymptotics") {
    const BaseDomain iv(Interval{1.0});
    const auto t = const_asymptotics(iv, FiberSpectrum::sphere(2), 1, {4, 8, 16, 32});
    CHECK(t.deviations_decrease);
    const double want = 32.0 * std::sqrt(2.0) * std::tanh(std::sqrt(2.0) / 64);
    CHECK(t.rows.back().scaled == Approx(want).epsilon(1e-7));
    CHECK(t.rows.back().deviation == Approx(1.6e-4).epsilon(0.05));
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(std::abs(t.rows[i].ratio - 0.25) <= 0.05);
    // sigma_{lambda_k, 0}(C) <= lambda_k |Omega| / (C^2 |dOmega|).
    for (const auto& r : t.rows) CHECK(r.sigma <= r.limit / (r.C * r.C));
    CHECK_THROWS(const_asymptotics(iv, FiberSpectrum::sphere(2), 1, {8, 4}));
}

TEST_CASE("Lp bound") {
    const BaseDomain iv(Interval{1.0});
    const auto s3 = FiberSpectrum::sphere(3);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 5; ++t) {
        const auto h = oracle::random_pl(rng, iv);
        const auto lp = bound_lp(iv, h, s3, 2, 1.0);
        const auto basic = bound_basic(iv, h, s3, 2);
        CHECK(lp.rhs == Approx(basic.rhs).epsilon(1e-12));
        CHECK(lp.pass);
        CHECK(lp.margin > lp.tol);
    }
    // p = 2, n = 3 on [0, 1]: rhs = lambda_k ||h||_2 / 2.
    const auto h = WarpingFunction::from_function(
        [](double x) { return 1.0 + (std::sqrt(10.0) - 1.0) * 4.0 * x * (1.0 - x); }, 1.0, 64);
    const double norm = lp_norm(iv, h, 2.0);
    const auto r = bound_lp(iv, h, s3, 1, 2.0);
    CHECK(r.rhs == Approx(3.0 * norm / 2.0).epsilon(1e-12));
    CHECK(bound_lp(iv, WarpingFunction::constant(1.0), s3, 1, 3.0).rhs == Approx(1.5));
    CHECK_THROWS(bound_lp(iv, h, FiberSpectrum::sphere(2), 1, 2.0));
    CHECK_THROWS(bound_lp(iv, h, FiberSpectrum::sphere(4), 1, 1.0));
    CHECK_THROWS(bound_lp(iv, WarpingFunction::constant(2.0), s3, 1, 2.0));
}

TEST_CASE("interval bounds are observational") {
    const auto r = bound_interval(WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, 2.0, 1.0);
    CHECK(r.general.observational);
    CHECK(r.general.rhs == Approx(0.5));
    CHECK(r.general.lhs == Approx(kCyl).epsilon(1e-6));
    CHECK_FALSE(r.general.pass);
    REQUIRE(r.first.has_value());
    CHECK(r.first->observational);
    CHECK(r.first->rhs == Approx(4.0 * 9.0));
    CHECK_FALSE(bound_interval(WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 2, 2.0, 1.0).first);
    CHECK_THROWS(bound_interval(WarpingFunction::ramp(1.0, 2.0, 1.0), FiberSpectrum::sphere(2), 1, 2.0, 1.0));
    // rhs grows like C^{n-2}.
    const auto a = bound_interval(make_hdelta(BaseDomain(Interval{1.0}), 4.0, 0.1), FiberSpectrum::sphere(4), 1, 2.0, 1.0);
    const auto b = bound_interval(make_hdelta(BaseDomain(Interval{1.0}), 8.0, 0.1), FiberSpectrum::sphere(4), 1, 2.0, 1.0);
    CHECK(b.general.rhs / a.general.rhs == Approx(4.0).epsilon(0.02));
}

TEST_CASE("stability on the unit cylinder") {
    const BaseDomain iv(Interval{1.0});
    const auto s = stability_report(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, 0.5, 0.25);
    CHECK(s.deficit == Approx(1.0 - kCyl).epsilon(1e-5));
    CHECK(s.lhs == Approx(0.5).epsilon(1e-14));
    const double rhs = 2 * 0.0625 / (4 * (1.0 - kCyl)) * (0.25 / 2) - 2 * 0.0625 * 0.5;
    CHECK(s.rhs == Approx(rhs).epsilon(1e-5));
    CHECK(s.trivial);
    CHECK(s.pass);
    CHECK_THROWS(stability_report(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(3), 1, 0.5, 0.25));
    CHECK_THROWS(stability_report(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, 0.9, 0.25));
    const BaseDomain disk(Ball{2, 1.0});
    CHECK_THROWS(stability_report(disk, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, 0.1, 0.25));
    const auto d = stability_report(disk, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, 0.0, 0.5);
    CHECK(d.lhs == Approx(std::numbers::pi * 0.25).epsilon(1e-12));
    CHECK(d.pass);
}

TEST_CASE("improved bound") {
    const BaseDomain iv(Interval{1.0});
    const auto one = WarpingFunction::constant(1.0);
    const auto s2 = FiberSpectrum::sphere(2);
    const Subdomain D{0.5, 0.25};
    const auto ib = improved_bound(iv, one, s2, 1, D, distance_profile(iv, D));
    CHECK(ib.report.rhs < 1.0);
    CHECK(ib.basic_rhs == Approx(1.0));
    CHECK(ib.report.lhs == Approx(kCyl).epsilon(1e-6));
    CHECK(ib.report.pass);
    CHECK(ib.correction > 0.0);
    // Closed form for h = 1, tent of half-width r: I1 = r^2, I2 = 2r + lam 2r^3/3.
    const double r = 0.25;
    const double i1 = r * r;
    const double i2 = 2 * r + 2.0 * 2 * r * r * r / 3;
    CHECK(ib.t0 == Approx(2.0 * i1 / i2).epsilon(1e-12));
    CHECK(ib.report.rhs == Approx(1.0 - 4.0 * i1 * i1 / (i2 * 2.0)).epsilon(1e-12));

    // rhs is the Rayleigh quotient of 1 - t0 f on a mesh with the kinks as nodes.
    const auto f = distance_profile(iv, D);
    const Mesh mesh = adapted_mesh(iv, 1024, one, {{0.25, 0.25, 0}, {0.5, 0.5, 0}, {0.75, 0.75, 0}});
    std::vector<double> a;
    for (double x : mesh.nodes) a.push_back(1.0 - ib.t0 * f.value(x));
    // P1 interpolation of a piecewise-linear f on aligned nodes is exact.
    CHECK(rayleigh_quotient(a, iv, one, mesh, 2, 2.0) == Approx(ib.report.rhs).epsilon(1e-12));

    // Shrinking the support sends the correction to zero.
    const Subdomain tiny{0.5, 1e-4};
    const auto small = improved_bound(iv, one, s2, 1, tiny, distance_profile(iv, tiny));
    CHECK(small.correction < 1e-7);

    const TrialProfile negative{[](double) { return -1.0; }, [](double) { return 0.0; }, {}};
    CHECK_THROWS(improved_bound(iv, one, s2, 1, D, negative));
    const TrialProfile no_rim{[](double) { return 1.0; }, [](double) { return 0.0; }, {}};
    CHECK_THROWS(improved_bound(iv, one, s2, 1, D, no_rim));
}

TEST_CASE("helmholtz slope") {
    CHECK(helmholtz_slope(BaseDomain(Interval{1.0})) == Approx(0.5).epsilon(1e-3));
    CHECK(helmholtz_slope(BaseDomain(Ball{2, 1.0})) == Approx(0.5).epsilon(1e-3));
    CHECK(helmholtz_slope(BaseDomain(Ball{3, 1.0})) == Approx(1.0 / 3.0).epsilon(1e-3));
    CHECK(helmholtz_slope(BaseDomain(Interval{3.0})) == Approx(1.5).epsilon(1e-3));
    const BaseDomain iv(Interval{1.0});
    CHECK(aux_spectrum(iv, WarpingFunction::constant(1.0), 2, 0.0, 1, 256).values[0].sigma == 0.0);
}

TEST_CASE("mesh tolerance floor") {
    const BaseDomain iv(Interval{1.0});
    SolveSettings s;
    s.min_tol = 1e-3;
    CHECK(mesh_tolerance(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, s) == 1e-3);
    s.min_tol = 0.0;
    s.mesh_elements = 16;
    CHECK(mesh_tolerance(iv, WarpingFunction::constant(1.0), FiberSpectrum::sphere(2), 1, s) > 0.0);
}
