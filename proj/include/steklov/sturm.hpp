#pragma once

#include "steklov/geometry.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace steklov {

/// Failure inside one auxiliary solve, tagged with the (lambda, mu, mesh) triple.
class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, double lambda, double mu, int elements);

    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    int elements() const { return elements_; }

  private:
    double lambda_;
    double mu_;
    int elements_;
};

/// One auxiliary Steklov problem  L_h a + lambda h^{-2} a = 0,  d_nu a = sigma a,
/// restricted to a boundary-harmonic mode with eigenvalue `mu` on a ball base.
/// For an interval base `mu` must be 0.
struct AuxProblem {
    const BaseDomain& base;
    const WarpingFunction& h;
    const Mesh& mesh;
    int fiber_dim;
    double lambda;
    double mu = 0.0;
};

/// Symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }
    std::vector<double> multiply(std::span<const double> x) const;
    double quadratic_form(std::span<const double> x) const;
};

/// P1 energy form A and boundary form B of the Rayleigh quotient over the mesh nodes.
struct DiscreteForms {
    Tridiagonal energy;
    /// Diagonal of B; zero away from the boundary degrees of freedom.
    std::vector<double> boundary;
    std::vector<int> boundary_dofs;
    /// Row sums of the energy matrix, accumulated from the reaction terms
    /// directly; with the couplings they determine A without cancellation.
    std::vector<double> row_sum;
    /// Ball modes with mu > 0 constrain the r = 0 value to zero.
    bool origin_pinned = false;
    double lambda = 0.0;
    double mu = 0.0;

    int elements() const { return static_cast<int>(energy.size()) - 1; }
};

/// Assembles A and B with per-element Gauss-Legendre quadrature.
/// Throws SolverError when h is not positive at a quadrature node.
DiscreteForms assemble(const AuxProblem& problem);

struct DtnEigenpair {
    double sigma;
    /// Nodal values of the discrete eigenfunction, normalised so that the
    /// boundary form equals 1.
    std::vector<double> nodal;
};

/// Eigenvalues of the discrete Dirichlet-to-Neumann pencil S q = sigma B_bb q,
/// with S the Schur complement of the interior block. Sorted ascending:
/// two values for an interval, one for a ball mode.
std::vector<double> dtn_eigenvalues(const DiscreteForms& forms);
std::vector<DtnEigenpair> dtn_eigenpairs(const DiscreteForms& forms);

/// Eigenvalue and its label within an auxiliary spectrum: the aux index l
/// (interval) or the degree m of the boundary harmonic (ball).
struct AuxEigenvalue {
    double sigma;
    int label;
};

struct AuxSpectrum {
    double lambda;
    std::vector<AuxEigenvalue> values;
};

inline constexpr int kMinSolverElements = 8;

/// Smallest auxiliary eigenvalues sigma_{lambda,l}(h). An interval yields
/// both of its eigenvalues; a ball yields the `l_max` smallest values, each
/// mode repeated with the multiplicity of its boundary harmonic.
AuxSpectrum aux_spectrum(const BaseDomain& base, const WarpingFunction& h, int fiber_dim, double lambda,
                         int l_max, const Mesh& mesh);
AuxSpectrum aux_spectrum(const BaseDomain& base, const WarpingFunction& h, int fiber_dim, double lambda,
                         int l_max, int mesh_elements = kDefaultMeshElements);

/// Rayleigh quotient of the nodal function `a` under the same quadrature as assemble().
double rayleigh_quotient(std::span<const double> a, const BaseDomain& base, const WarpingFunction& h,
                         const Mesh& mesh, int fiber_dim, double lambda, double mu = 0.0);

/// Three-column text dump (sub, diag, super) of the energy matrix, one row per node.
void dump_tridiagonal(std::ostream& out, const Tridiagonal& t);

}  // namespace steklov
