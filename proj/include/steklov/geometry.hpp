#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace steklov {

// ---------------------------------------------------------------------------
// Base domains
// ---------------------------------------------------------------------------

struct Interval {
    double length;
};

/// Euclidean d-ball of radius R; functions on it are radial in r in [0, R].
struct Ball {
    int dim;
    double radius;
};

/// Base manifold with boundary. The 1D coordinate runs over [0, extent()]:
/// the axial coordinate t for an interval and the radius r for a ball.
class BaseDomain {
  public:
    BaseDomain(Interval iv);
    BaseDomain(Ball b);

    bool is_interval() const { return std::holds_alternative<Interval>(kind_); }
    bool is_ball() const { return std::holds_alternative<Ball>(kind_); }
    const Interval& interval() const { return std::get<Interval>(kind_); }
    const Ball& ball() const { return std::get<Ball>(kind_); }

    int dim() const;
    double extent() const;
    /// Largest r such that some ball B(q, r) fits inside the domain.
    double inradius() const;
    /// Boundary coordinates: {0, L} for an interval, {R} for a ball.
    std::vector<double> boundary_points() const;
    /// Volume density factor at coordinate x: 1 for an interval,
    /// |S^{d-1}| x^{d-1} for a ball.
    double volume_density(double x) const;
    /// Boundary measure attached to each boundary point.
    double boundary_weight() const;
    std::string describe() const;

  private:
    std::variant<Interval, Ball> kind_;
};

/// Volume of the Euclidean unit ball in R^d.
double unit_ball_volume(int d);
/// Area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int d);

double volume(const BaseDomain& base);
double boundary_area(const BaseDomain& base);

// ---------------------------------------------------------------------------
// Fibers
// ---------------------------------------------------------------------------

struct EigenvalueMult {
    double value;
    int multiplicity;

    friend bool operator==(const EigenvalueMult&, const EigenvalueMult&) = default;
};

/// Closed connected fiber with a known Laplace spectrum.
class FiberSpectrum {
  public:
    enum class Kind { circle, sphere, torus, explicit_list };

    static FiberSpectrum circle(double radius = 1.0);
    /// Unit round sphere S^n.
    static FiberSpectrum sphere(int n);
    /// Flat rectangular torus R^n / (L_1 Z x ... x L_n Z).
    static FiberSpectrum torus(std::vector<double> lengths);
    /// Distinct eigenvalues with multiplicities, starting at (0, 1).
    static FiberSpectrum explicit_list(int n, std::vector<EigenvalueMult> eigenvalues);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double radius() const { return radius_; }
    const std::vector<double>& lengths() const { return lengths_; }
    std::string describe() const;

  private:
    FiberSpectrum() = default;

    Kind kind_ = Kind::circle;
    int dim_ = 1;
    double radius_ = 1.0;
    std::vector<double> lengths_;
    std::vector<EigenvalueMult> explicit_;

    friend std::vector<EigenvalueMult> fiber_eigenvalues(const FiberSpectrum&, int);
};

/// First `count` distinct fiber eigenvalues (lambda_j, multiplicity), sorted,
/// starting with (0, 1). Explicit lists return at most their own length.
std::vector<EigenvalueMult> fiber_eigenvalues(const FiberSpectrum& fiber, int count);

/// lambda_k counted with multiplicity (lambda_0 = 0).
double fiber_lambda_k(const FiberSpectrum& fiber, int k);

/// Laplace eigenvalues of the boundary sphere S^{d-1}(R) of a ball,
/// mu_m = m(m+d-2)/R^2 with the dimension of degree-m spherical harmonics.
/// An interval yields the single mode (0, 2): two boundary degrees of freedom.
std::vector<EigenvalueMult> boundary_harmonics(const BaseDomain& base, int count);

/// Dimension of the space of degree-m spherical harmonics on S^{d-1}.
long long spherical_harmonic_dimension(int d, int m);

// ---------------------------------------------------------------------------
// Warping functions
// ---------------------------------------------------------------------------

/// Sub-range of the base coordinate that the mesh must resolve with at
/// least `min_elements` elements.
struct RefineZone {
    double lo;
    double hi;
    int min_elements;
};

/// Positive function h on the base coordinate, held as piecewise-linear
/// samples. Closed-form presets also carry an exact evaluator that takes
/// precedence over interpolation.
class WarpingFunction {
  public:
    enum class Preset { constant, ramp, collar_bump, custom };
    using Evaluator = std::function<double(double)>;

    static WarpingFunction constant(double value);
    /// Linear from `at_zero` at coordinate 0 to `at_extent` at coordinate `extent`.
    static WarpingFunction ramp(double at_zero, double at_extent, double extent);
    /// Piecewise-linear through strictly increasing knots.
    static WarpingFunction piecewise_linear(std::vector<double> knots, std::vector<double> values,
                                            Preset preset = Preset::custom);
    /// Samples `f` on a uniform grid of `samples` intervals and keeps `f` as the exact evaluator.
    static WarpingFunction from_function(Evaluator f, double extent, int samples,
                                         Preset preset = Preset::custom);

    double operator()(double x) const;

    Preset preset() const { return preset_; }
    bool has_exact_evaluator() const { return static_cast<bool>(exact_); }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<RefineZone>& refine_zones() const { return zones_; }

    /// Copy with an exact evaluator attached (the samples remain the fallback).
    WarpingFunction with_evaluator(Evaluator f) const;
    WarpingFunction with_refine_zones(std::vector<RefineZone> zones) const;

    /// Checks positivity and that the samples span the base coordinate.
    void validate(const BaseDomain& base) const;
    /// Values of h at the boundary points of `base`.
    std::vector<double> boundary_trace(const BaseDomain& base) const;
    /// True when every boundary value equals 1 within `tol`.
    bool is_normalised(const BaseDomain& base, double tol = 1e-12) const;
    /// Max of h over knots and a fine uniform probe of the base coordinate.
    double max_on(const BaseDomain& base, int probes = 4096) const;
    double min_on(const BaseDomain& base, int probes = 4096) const;

  private:
    WarpingFunction() = default;

    Preset preset_ = Preset::custom;
    std::vector<double> knots_;
    std::vector<double> values_;
    Evaluator exact_;
    std::vector<RefineZone> zones_;
};

/// Reads a two-column (coordinate, value) text file; '#' starts a comment.
/// Coordinates must increase strictly and span [0, extent] of `base`.
WarpingFunction load_warping(std::istream& in, const BaseDomain& base);
WarpingFunction load_warping_file(const std::string& path, const BaseDomain& base);

// ---------------------------------------------------------------------------
// Meshes and integrals
// ---------------------------------------------------------------------------

/// Nodes of a 1D mesh over [0, extent], strictly increasing.
struct Mesh {
    std::vector<double> nodes;

    int elements() const { return static_cast<int>(nodes.size()) - 1; }
};

inline constexpr int kDefaultMeshElements = 1024;

Mesh uniform_mesh(const BaseDomain& base, int elements);

/// Uniform mesh refined to place h's knots on element boundaries and to
/// resolve every refine zone of h (and of `extra_zones`).
Mesh adapted_mesh(const BaseDomain& base, int elements, const WarpingFunction& h,
                  const std::vector<RefineZone>& extra_zones = {});

/// Integral over [lo, hi] of g(x) * volume_density(x) using per-element
/// Gauss-Legendre with `points` nodes on the elements of `mesh`.
double integrate_on_mesh(const BaseDomain& base, const Mesh& mesh, const std::function<double(double)>& g,
                         int points, double lo, double hi);

/// Integral of h^s over the base, dV including the ball's radial density.
/// Throws std::domain_error when h^s overflows on the quadrature nodes.
double weighted_volume_integral(const BaseDomain& base, const WarpingFunction& h, double s,
                                int mesh_elements = kDefaultMeshElements);
/// Integral of h^s over the boundary (counting measure on interval endpoints).
double weighted_boundary_integral(const BaseDomain& base, const WarpingFunction& h, double s);
/// (integral of h^p dV)^(1/p); p >= 1.
double lp_norm(const BaseDomain& base, const WarpingFunction& h, double p,
               int mesh_elements = kDefaultMeshElements);

}  // namespace steklov
