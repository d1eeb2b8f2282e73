#pragma once

#include "steklov/geometry.hpp"
#include "steklov/report.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace steklov {

/// Raised when the frontier merge cannot certify the requested prefix.
class CertificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One (j, l) cell of the separated spectrum.
struct SpectrumEntry {
    double sigma;
    int j;
    int l;
    double lambda;
    /// Fiber multiplicity of lambda_j.
    int multiplicity;
    /// Boundary-harmonic degree for ball bases, l for intervals.
    int label;
};

/// One row per eigenvalue counted with multiplicity.
struct SpectrumRow {
    int k;
    double sigma;
    int j;
    int l;
    double lambda;
    int multiplicity;
};

struct SpectrumOptions {
    /// Budgets on distinct fiber eigenvalues and aux indices.
    int j_max = 64;
    int l_max = 64;
    /// The next unexplored value must exceed sigma_K by this much.
    double certify_margin = 1e-9;
};

class SteklovSpectrum {
  public:
    SteklovSpectrum(BaseDomain base, Mesh mesh, int fiber_dim, int truncation, bool certified,
                    std::vector<SpectrumEntry> entries);

    const std::vector<SpectrumEntry>& entries() const { return entries_; }
    int truncation() const { return truncation_; }
    bool certified() const { return certified_; }
    const BaseDomain& base() const { return base_; }
    const Mesh& mesh() const { return mesh_; }
    int fiber_dim() const { return fiber_dim_; }

    /// Entries expanded by multiplicity, indices 0..(total count - 1).
    std::vector<SpectrumRow> rows() const;
    /// The entry supplying sigma_k.
    const SpectrumEntry& entry_for(int k) const;

  private:
    BaseDomain base_;
    Mesh mesh_;
    int fiber_dim_;
    int truncation_;
    bool certified_;
    std::vector<SpectrumEntry> entries_;
};

/// Steklov spectrum of the warped product base x_h fiber through index K,
/// merged from auxiliary spectra with a min-heap over the (j, l) grid.
SteklovSpectrum steklov_spectrum(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber,
                                 int K, const Mesh& mesh, const SpectrumOptions& options = {});
SteklovSpectrum steklov_spectrum(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber,
                                 int K, int mesh_elements = kDefaultMeshElements,
                                 const SpectrumOptions& options = {});

/// sigma_k(M_h) counted with multiplicity; requires a certified spectrum and k <= K.
double sigma_k(const SteklovSpectrum& spec, int k);

/// sigma_k(M_h) <= sigma_{lambda_k,0}(h), evaluated on the spectrum's own mesh.
BoundReport check_kcompk0(const SteklovSpectrum& spec, const WarpingFunction& h, const FiberSpectrum& fiber,
                          int k);

/// CSV with header k,sigma,j,l,lambda_j,multiplicity; rows 0..K.
void write_spectrum_csv(std::ostream& out, const SteklovSpectrum& spec);

}  // namespace steklov
