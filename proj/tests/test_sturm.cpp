#include "doctest.h"
#include "oracles.hpp"

#include "steklov/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace steklov;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("hand assembly of a two-element stiffness") {
    const BaseDomain iv(Interval{1.0});
    const auto one = WarpingFunction::constant(1.0);
    const Mesh mesh = uniform_mesh(iv, 2);
    const auto f = assemble({iv, one, mesh, 2, 0.0, 0.0});
    const std::vector<double> diag{2.0, 4.0, 2.0};
    for (int i = 0; i < 3; ++i) CHECK(f.energy.diag[i] == Approx(diag[i]).epsilon(1e-14));
    for (double v : f.energy.off) CHECK(v == Approx(-2.0).epsilon(1e-14));
    CHECK(f.boundary == std::vector<double>{1.0, 0.0, 1.0});
    const std::vector<double> ones(3, 1.0);
    for (double v : f.energy.multiply(ones)) CHECK(v == Approx(0.0));
    std::ostringstream dump;
    dump_tridiagonal(dump, f.energy);
    const std::string text = dump.str();
    std::istringstream back(text);
    const std::vector<double> expected{0, 2, -2, -2, 4, -2, -2, 2, 0};
    for (double e : expected) {
        double v = 1e300;
        back >> v;
        CHECK(v == Approx(e).epsilon(1e-14));
    }
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("constants lie in the kernel for lambda = mu = 0") {
    const BaseDomain iv(Interval{2.0});
    const auto h = WarpingFunction::piecewise_linear({0.0, 1.0, 2.0}, {1.0, 3.0, 1.0});
    const Mesh mesh = adapted_mesh(iv, 64, h);
    const auto f = assemble({iv, h, mesh, 3, 0.0, 0.0});
    const std::vector<double> ones(mesh.nodes.size(), 1.0);
    for (double v : f.energy.multiply(ones)) CHECK(std::abs(v) <= 1e-9);
    for (double v : f.row_sum) CHECK(v == 0.0);
}

TEST_CASE("assembly rejects invalid problems") {
    const BaseDomain iv(Interval{1.0});
    const BaseDomain disk(Ball{2, 1.0});
    const auto one = WarpingFunction::constant(1.0);
    const Mesh mesh = uniform_mesh(iv, 16);
    CHECK_THROWS_AS(assemble({iv, one, mesh, 2, -1.0, 0.0}), SolverError);
    CHECK_THROWS_AS(assemble({iv, one, mesh, 2, 1.0, 1.0}), SolverError);
    CHECK_THROWS_AS(assemble({iv, one, uniform_mesh(iv, 1), 2, 1.0, 0.0}), SolverError);
    CHECK_THROWS_AS(assemble({disk, one, uniform_mesh(BaseDomain(Ball{2, 2.0}), 16), 2, 1.0, 0.0}), SolverError);
    const auto bad = one.with_evaluator([](double x) { return x - 0.5; });
    try {
        assemble({iv, bad, mesh, 2, 3.0, 0.0});
        FAIL("expected a solver error");
    } catch (const SolverError& e) {
        const std::string what = e.what();
        CHECK(what.find("lambda=3") != std::string::npos);
        CHECK(what.find("mesh=16") != std::string::npos);
        CHECK(e.lambda() == 3.0);
    }
}

TEST_CASE("disk modes with mu > 0 are positive definite at lambda = 0") {
    const BaseDomain disk(Ball{2, 1.0});
    const auto one = WarpingFunction::constant(1.0);
    const Mesh mesh = uniform_mesh(disk, 8);
    const auto f = assemble({disk, one, mesh, 2, 0.0, 1.0});
    CHECK(f.origin_pinned);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x(mesh.nodes.size());
        for (auto& v : x) v = g(rng);
        CHECK(f.energy.quadratic_form(x) > 0.0);
    }
    CHECK(dtn_eigenvalues(f)[0] > 0.5);
}

TEST_CASE("cylinder closed forms") {
    const auto one = WarpingFunction::constant(1.0);
    for (double L : {0.5, 1.0, 3.0}) {
        const BaseDomain iv(Interval{L});
        for (double lam : {0.0, 0.1, 1.0, 2.0, 6.0, 40.0}) {
            const auto a = aux_spectrum(iv, one, 2, lam, 2, 2048);
            const auto [lo, hi] = oracle::cylinder_pair(lam, L);
            REQUIRE(a.values.size() == 2);
            CHECK(a.values[0].label == 0);
            CHECK(a.values[1].label == 1);
            if (lam == 0.0)
                CHECK(a.values[0].sigma == 0.0);
            else
                CHECK(rel(a.values[0].sigma, lo) <= 1e-5);
            CHECK(rel(a.values[1].sigma, hi) <= 1e-5);
        }
    }
    const auto a = aux_spectrum(BaseDomain(Interval{1.0}), one, 2, 2.0, 2, 2048);
    CHECK(a.values[0].sigma == Approx(0.861057).epsilon(1e-5));
    CHECK(a.values[1].sigma == Approx(2.322726).epsilon(1e-5));
}

TEST_CASE("disk Dirichlet-to-Neumann spectrum") {
    const BaseDomain disk(Ball{2, 1.0});
    const auto one = WarpingFunction::constant(1.0);
    const Mesh mesh = uniform_mesh(disk, 2048);
    for (int m = 0; m <= 6; ++m) {
        const auto s = dtn_eigenvalues(assemble({disk, one, mesh, 2, 0.0, double(m * m)}));
        CHECK(std::abs(s[0] - m) <= 1e-5 * std::max(1, m));
    }
    const auto a = aux_spectrum(disk, one, 2, 0.0, 4, mesh);
    REQUIRE(a.values.size() == 4);
    CHECK(a.values[0].sigma == 0.0);
    CHECK(a.values[1].sigma == Approx(1.0).epsilon(1e-5));
    CHECK(a.values[2].sigma == Approx(1.0).epsilon(1e-5));
    CHECK(a.values[3].sigma == Approx(2.0).epsilon(1e-5));
    CHECK(a.values[3].label == 2);
    // Ball of radius 2 in R^3: harmonic r^m Y_m gives sigma = m / R.
    const BaseDomain b3(Ball{3, 2.0});
    const auto a3 = aux_spectrum(b3, one, 2, 0.0, 5, 2048);
    CHECK(a3.values[1].sigma == Approx(0.5).epsilon(1e-5));
    CHECK(a3.values[4].sigma == Approx(1.0).epsilon(1e-5));
    CHECK(a3.values[4].label == 2);
}

TEST_CASE("scaling identity for constant warping") {
    for (const BaseDomain& base : {BaseDomain(Interval{1.3}), BaseDomain(Ball{2, 1.0}), BaseDomain(Ball{3, 0.7})}) {
        for (double C : {0.5, 3.0, 32.0}) {
            for (double lam : {0.0, 2.0, 12.0}) {
                const auto a = aux_spectrum(base, WarpingFunction::constant(C), 3, lam, 4, 256);
                const auto b = aux_spectrum(base, WarpingFunction::constant(1.0), 3, lam / (C * C), 4, 256);
                for (std::size_t l = 0; l < a.values.size(); ++l) {
                    if (b.values[l].sigma == 0.0)
                        CHECK(a.values[l].sigma == 0.0);
                    else
                        CHECK(rel(a.values[l].sigma, b.values[l].sigma) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("eigenpairs and the Rayleigh quotient") {
    std::mt19937_64 rng(5);
    for (const BaseDomain& base : {BaseDomain(Interval{1.0}), BaseDomain(Ball{2, 1.0})}) {
        const auto h = oracle::random_pl(rng, base);
        const Mesh mesh = adapted_mesh(base, 256, h);
        for (double mu : {0.0, 4.0}) {
            if (base.is_interval() && mu > 0.0) continue;
            const auto f = assemble({base, h, mesh, 3, 2.5, mu});
            for (const auto& e : dtn_eigenpairs(f)) {
                CHECK(rel(rayleigh_quotient(e.nodal, base, h, mesh, 3, 2.5, mu), e.sigma) <= 1e-10);
                double bn = 0.0;
                for (int b : f.boundary_dofs) bn += f.boundary[b] * e.nodal[b] * e.nodal[b];
                CHECK(bn == Approx(1.0).epsilon(1e-12));
            }
        }
    }
    // Constant trial on a cylinder: lambda |Omega| / |dOmega|.
    const BaseDomain iv(Interval{1.0});
    const auto one = WarpingFunction::constant(1.0);
    const Mesh mesh = uniform_mesh(iv, 64);
    const std::vector<double> ones(65, 1.0);
    CHECK(rayleigh_quotient(ones, iv, one, mesh, 2, 2.0) == Approx(1.0).epsilon(1e-13));
    std::vector<double> interior(65, 1.0);
    interior.front() = interior.back() = 0.0;
    CHECK_THROWS_AS(rayleigh_quotient(interior, iv, one, mesh, 2, 2.0), std::domain_error);
    const BaseDomain disk(Ball{2, 1.0});
    CHECK_THROWS(rayleigh_quotient(ones, disk, one, uniform_mesh(disk, 64), 2, 0.0, 1.0));
}

TEST_CASE("constant trial with trace-one warping gives the basic bound") {
    std::mt19937_64 rng(9);
    for (const BaseDomain& base : {BaseDomain(Interval{1.0}), BaseDomain(Ball{2, 1.0})}) {
        const auto h = oracle::random_pl(rng, base);
        const Mesh mesh = adapted_mesh(base, 512, h);
        const std::vector<double> ones(mesh.nodes.size(), 1.0);
        for (int n : {2, 3, 4}) {
            const double lam = 3.0;
            const double want =
                lam * weighted_volume_integral(base, h, n - 2, 512) / weighted_boundary_integral(base, h, n);
            CHECK(rel(rayleigh_quotient(ones, base, h, mesh, n, lam), want) <= 1e-12);
        }
    }
}

TEST_CASE("variational upper bound and monotonicity") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    const BaseDomain iv(Interval{1.0});
    const auto h = oracle::random_pl(rng, iv);
    const Mesh mesh = adapted_mesh(iv, 256, h);
    const double sigma0 = aux_spectrum(iv, h, 2, 1.5, 2, mesh).values[0].sigma;
    for (int t = 0; t < 40; ++t) {
        std::vector<double> a(mesh.nodes.size());
        for (auto& v : a) v = g(rng);
        CHECK(rayleigh_quotient(a, iv, h, mesh, 2, 1.5) >= sigma0 * (1 - 1e-12));
    }
    double prev0 = -1.0;
    double prev1 = -1.0;
    for (int i = 0; i < 20; ++i) {
        const auto a = aux_spectrum(iv, h, 2, 0.5 * i, 2, mesh);
        CHECK(a.values[0].sigma >= prev0);
        CHECK(a.values[1].sigma >= prev1);
        prev0 = a.values[0].sigma;
        prev1 = a.values[1].sigma;
    }
    // Strictly increasing in mu on a ball.
    const BaseDomain disk(Ball{2, 1.0});
    const auto hd = oracle::random_pl(rng, disk);
    const Mesh md = adapted_mesh(disk, 256, hd);
    double prev = -1.0;
    for (int m = 0; m < 6; ++m) {
        const double s = dtn_eigenvalues(assemble({disk, hd, md, 2, 1.0, double(m * m)}))[0];
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("second-order mesh convergence") {
    std::mt19937_64 rng(4);
    for (const BaseDomain& base : {BaseDomain(Interval{1.0}), BaseDomain(Ball{2, 1.0}), BaseDomain(Ball{3, 1.0})}) {
        const auto h = WarpingFunction::from_function(
            [](double x) { return 1.0 + 0.5 * std::sin(3.0 * x) * x; }, base.extent(), 64);
        for (double lam : {1.0, 7.0}) {
            auto s = [&](int N) { return aux_spectrum(base, h, 3, lam, 2, uniform_mesh(base, N)).values[0].sigma; };
            const double a = s(64);
            const double b = s(128);
            const double c = s(256);
            CHECK(std::abs(a - b) <= 4.5 * std::abs(b - c));
            CHECK(a >= b);
            CHECK(b >= c);
        }
    }
}

TEST_CASE("thin collars do not lose precision") {
    // Elements of length ~1e-6 next to unit-size elements: the reduction must
    // not cancel the large diagonal against the couplings.
    const BaseDomain iv(Interval{1.0});
    const auto C = WarpingFunction::constant(32.0);
    const auto thin = WarpingFunction::piecewise_linear({0.0, 1e-4, 1.0 - 1e-4, 1.0}, {1, 1, 1, 1})
                          .with_refine_zones({{0.0, 1e-4, 64}, {1.0 - 1e-4, 1.0, 64}});
    const double uniform = aux_spectrum(iv, C, 2, 2.0, 2, uniform_mesh(iv, 1024)).values[0].sigma;
    const double graded = aux_spectrum(iv, C, 2, 2.0, 2, adapted_mesh(iv, 1024, thin)).values[0].sigma;
    CHECK(rel(graded, uniform) <= 1e-9);
}
