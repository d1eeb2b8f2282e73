#include "steklov/sturm.hpp"

#include "steklov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace steklov {

SolverError::SolverError(const std::string& what, double lambda, double mu, int elements)
    : std::runtime_error([&] {
          std::ostringstream os;
          os.precision(12);
          os << what << " (lambda=" << lambda << ", mu=" << mu << ", mesh=" << elements << ")";
          return os.str();
      }()),
      lambda_(lambda),
      mu_(mu),
      elements_(elements) {}

std::vector<double> Tridiagonal::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = diag[i] * x[i];
        if (i > 0) y[i] += off[i - 1] * x[i - 1];
        if (i + 1 < n) y[i] += off[i] * x[i + 1];
    }
    return y;
}

double Tridiagonal::quadratic_form(std::span<const double> x) const {
    const auto y = multiply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += x[i] * y[i];
    return s;
}

namespace {

/// Gaussian elimination along a path of nodes 0..m toward the terminal node m.
/// The matrix is given by positive-form data: couplings c (A_{i,i+1} = -c_i) and
/// row sums r, so every update adds nonnegative terms when the couplings are
/// positive and no diagonal is formed by subtraction.
struct Chain {
    /// Schur complement of the terminal node.
    double excess = 0.0;
    /// Discrete harmonic extension of the unit value at the terminal, nodes 0..m.
    std::vector<double> extension;
    bool ok = true;
};

Chain eliminate_chain(std::span<const double> c, std::span<const double> r) {
    const std::size_t m = c.size();
    Chain out;
    std::vector<double> pivot(m);
    double e = r[0];
    for (std::size_t i = 0; i < m; ++i) {
        const double d = e + c[i];
        if (!(d > 0.0) || !std::isfinite(d)) {
            out.ok = false;
            return out;
        }
        pivot[i] = d;
        e = r[i + 1] + c[i] * e / d;
    }
    out.excess = e;
    out.extension.assign(m + 1, 0.0);
    out.extension[m] = 1.0;
    for (std::size_t i = m; i-- > 0;) out.extension[i] = c[i] * out.extension[i + 1] / pivot[i];
    return out;
}

struct SchurData {
    // Interval: S = [[a + g, -g], [-g, b + g]]. Ball: S = [a].
    double a = 0.0;
    double b = 0.0;
    double g = 0.0;
    // Harmonic extension of each boundary unit vector, over all nodes.
    std::vector<std::vector<double>> extension;
};

SchurData schur_complement(const DiscreteForms& f) {
    const auto& a = f.energy;
    const int last = static_cast<int>(a.size()) - 1;
    std::vector<double> c(a.off.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.off[i];
    const auto& r = f.row_sum;
    auto fail = [&] {
        return SolverError("indefinite interior block: elimination breakdown", f.lambda, f.mu, f.elements());
    };
    SchurData out;

    if (f.boundary_dofs.size() == 1) {
        const int first = f.origin_pinned ? 1 : 0;
        if (last - first < 1) throw SolverError("mesh has no interior nodes", f.lambda, f.mu, f.elements());
        const auto ch = eliminate_chain(std::span(c).subspan(first), std::span(r).subspan(first));
        if (!ch.ok) throw fail();
        out.a = ch.excess;
        std::vector<double> ext(last + 1, 0.0);
        std::copy(ch.extension.begin(), ch.extension.end(), ext.begin() + first);
        out.extension.push_back(std::move(ext));
        return out;
    }

    if (last < 2) throw SolverError("mesh has no interior nodes", f.lambda, f.mu, f.elements());
    // Two-terminal reduction: a, b are the shunts left at the terminals and g
    // the transfer coupling between them.
    double sa = r[0];
    double sb = r[1];
    double g = c[0];
    for (int i = 1; i < last; ++i) {
        const double d = g + sb + c[i];
        if (!(d > 0.0) || !std::isfinite(d)) throw fail();
        sa += g * sb / d;
        const double next = r[i + 1] + c[i] * sb / d;
        g = g * c[i] / d;
        sb = next;
    }
    out.a = sa;
    out.b = sb;
    out.g = g;

    // Extension of e_0 with the far end held at 0: chain from node last-1 down to 0.
    {
        std::vector<double> cr(c.rbegin() + 1, c.rend());
        std::vector<double> rr(r.rbegin() + 1, r.rend());
        rr[0] += c[last - 1];
        const auto ch = eliminate_chain(cr, rr);
        if (!ch.ok) throw fail();
        std::vector<double> ext(last + 1, 0.0);
        for (int i = 0; i < last; ++i) ext[i] = ch.extension[last - 1 - i];
        out.extension.push_back(std::move(ext));
    }
    // Extension of e_last with node 0 held at 0: chain from node 1 up to last.
    {
        std::vector<double> rr(r.begin() + 1, r.end());
        rr[0] += c[0];
        const auto ch = eliminate_chain(std::span(c).subspan(1), rr);
        if (!ch.ok) throw fail();
        std::vector<double> ext(last + 1, 0.0);
        std::copy(ch.extension.begin(), ch.extension.end(), ext.begin() + 1);
        out.extension.push_back(std::move(ext));
    }
    return out;
}

std::vector<double> extend(const SchurData& sd, std::span<const double> q) {
    std::vector<double> nodal(sd.extension.front().size(), 0.0);
    for (std::size_t b = 0; b < q.size(); ++b)
        for (std::size_t i = 0; i < nodal.size(); ++i) nodal[i] += q[b] * sd.extension[b][i];
    return nodal;
}

}  // namespace

DiscreteForms assemble(const AuxProblem& p) {
    const auto& base = p.base;
    const auto& nodes = p.mesh.nodes;
    const int ne = p.mesh.elements();
    if (ne < 2) throw SolverError("mesh must have at least 2 elements", p.lambda, p.mu, ne);
    if (p.lambda < 0.0 || p.mu < 0.0) throw SolverError("lambda and mu must be >= 0", p.lambda, p.mu, ne);
    if (base.is_interval() && p.mu != 0.0)
        throw SolverError("interval bases have a single boundary mode (mu = 0)", p.lambda, p.mu, ne);
    if (std::abs(nodes.front()) > 1e-12 * base.extent() ||
        std::abs(nodes.back() - base.extent()) > 1e-12 * base.extent())
        throw SolverError("mesh does not span the base coordinate", p.lambda, p.mu, ne);

    const int n = p.fiber_dim;
    const bool ball = base.is_ball();
    // Angular term uses the eigenvalue on the unit sphere: mu on S^{d-1}(R) times R^2.
    const double mu_unit = ball ? p.mu * base.extent() * base.extent() : 0.0;
    const auto rule = gauss_legendre(gauss_points_for_power(n, base.dim() + 1));

    DiscreteForms f;
    f.lambda = p.lambda;
    f.mu = p.mu;
    f.energy.diag.assign(ne + 1, 0.0);
    f.energy.off.assign(ne, 0.0);
    f.boundary.assign(ne + 1, 0.0);
    f.row_sum.assign(ne + 1, 0.0);

    for (int e = 0; e < ne; ++e) {
        const double x0 = nodes[e];
        const double x1 = nodes[e + 1];
        const double len = x1 - x0;
        const double half = 0.5 * len;
        const double mid = 0.5 * (x0 + x1);
        double k00 = 0.0;
        double k01 = 0.0;
        double k11 = 0.0;
        double rs0 = 0.0;
        double rs1 = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = mid + half * rule.nodes[q];
            const double w = rule.weights[q] * half * base.volume_density(x);
            const double hv = p.h(x);
            if (!(hv > 0.0) || !std::isfinite(hv))
                throw SolverError("non-positive warping function at a quadrature node", p.lambda, p.mu, ne);
            const double hn = std::pow(hv, n);
            const double stiff = hn / (len * len);
            double react = p.lambda * std::pow(hv, n - 2);
            if (mu_unit > 0.0) react += mu_unit * hn / (x * x);
            const double phi0 = (x1 - x) / len;
            const double phi1 = (x - x0) / len;
            k00 += w * (stiff + react * phi0 * phi0);
            k01 += w * (-stiff + react * phi0 * phi1);
            k11 += w * (stiff + react * phi1 * phi1);
            rs0 += w * react * phi0;
            rs1 += w * react * phi1;
        }
        f.energy.diag[e] += k00;
        f.energy.diag[e + 1] += k11;
        f.energy.off[e] += k01;
        f.row_sum[e] += rs0;
        f.row_sum[e + 1] += rs1;
    }

    if (ball) {
        f.origin_pinned = p.mu > 0.0;
        if (f.origin_pinned) {
            // Essential condition at r = 0: decouple the origin dof.
            f.row_sum[1] -= f.energy.off[0];
            f.energy.diag[0] = 1.0;
            f.energy.off[0] = 0.0;
            f.row_sum[0] = 1.0;
        }
        f.boundary_dofs = {ne};
        f.boundary[ne] = std::pow(p.h(base.extent()), n) * base.boundary_weight();
    } else {
        f.boundary_dofs = {0, ne};
        f.boundary[0] = std::pow(p.h(0.0), n);
        f.boundary[ne] = std::pow(p.h(base.extent()), n);
    }
    for (int b : f.boundary_dofs)
        if (!(f.boundary[b] > 0.0)) throw SolverError("singular boundary form", p.lambda, p.mu, ne);
    return f;
}

std::vector<DtnEigenpair> dtn_eigenpairs(const DiscreteForms& f) {
    const SchurData sd = schur_complement(f);
    const bool singular = f.lambda == 0.0 && f.mu == 0.0;
    std::vector<DtnEigenpair> out;

    if (f.boundary_dofs.size() == 1) {
        const double bw = f.boundary[f.boundary_dofs[0]];
        const double q = 1.0 / std::sqrt(bw);
        const double sigma = singular ? 0.0 : sd.a / bw;
        out.push_back({sigma, extend(sd, std::vector<double>{q})});
        return out;
    }

    const double b0 = f.boundary[f.boundary_dofs[0]];
    const double b1 = f.boundary[f.boundary_dofs[1]];
    if (singular) {
        // Constants span the kernel; the other eigenvalue is the trace of B^{-1} S.
        const double c = 1.0 / std::sqrt(b0 + b1);
        out.push_back({0.0, extend(sd, std::vector<double>{c, c})});
        const double sigma = sd.g / b0 + sd.g / b1;
        const double norm = std::sqrt(1.0 / b0 + 1.0 / b1);
        out.push_back({sigma, extend(sd, std::vector<double>{-1.0 / (b0 * norm), 1.0 / (b1 * norm)})});
        return out;
    }

    // Closed-form eigendecomposition of M = B^{-1/2} S B^{-1/2}; the small
    // eigenvalue comes from the determinant to avoid cancellation.
    const double s0 = std::sqrt(b0);
    const double s1 = std::sqrt(b1);
    const double m00 = (sd.a + sd.g) / b0;
    const double m11 = (sd.b + sd.g) / b1;
    const double m01 = -sd.g / (s0 * s1);
    const double det = (sd.a * sd.b + sd.g * (sd.a + sd.b)) / (b0 * b1);
    const double hi = 0.5 * (m00 + m11) + std::hypot(0.5 * (m00 - m11), m01);
    const double lo = det / hi;
    // Eigenvector of the larger eigenvalue, then its orthogonal complement.
    double vx = 0.0;
    double vy = 0.0;
    if (hi == lo) {
        vx = 0.0;
        vy = 1.0;
    } else if (m00 >= m11) {
        vx = m00 - lo;
        vy = m01;
    } else {
        vx = m01;
        vy = m11 - lo;
    }
    const double vn = std::hypot(vx, vy);
    vx /= vn;
    vy /= vn;
    // (vx, vy) spans the hi-eigenspace; (-vy, vx) the lo-eigenspace.
    auto to_nodal = [&](double ux, double uy) {
        if (uy < 0.0 || (uy == 0.0 && ux < 0.0)) {
            ux = -ux;
            uy = -uy;
        }
        return extend(sd, std::vector<double>{ux / s0, uy / s1});
    };
    out.push_back({lo, to_nodal(-vy, vx)});
    out.push_back({hi, to_nodal(vx, vy)});
    return out;
}

std::vector<double> dtn_eigenvalues(const DiscreteForms& forms) {
    std::vector<double> out;
    for (const auto& e : dtn_eigenpairs(forms)) out.push_back(e.sigma);
    return out;
}

AuxSpectrum aux_spectrum(const BaseDomain& base, const WarpingFunction& h, int fiber_dim, double lambda,
                         int l_max, const Mesh& mesh) {
    if (l_max < 1) throw std::invalid_argument("aux_spectrum: l_max must be >= 1");
    if (mesh.elements() < kMinSolverElements)
        throw SolverError("mesh must have at least 8 elements", lambda, 0.0, mesh.elements());
    AuxSpectrum out{lambda, {}};
    if (base.is_interval()) {
        const auto sig = dtn_eigenvalues(assemble({base, h, mesh, fiber_dim, lambda, 0.0}));
        out.values = {{sig[0], 0}, {sig[1], 1}};
        return out;
    }
    // Per-mode values increase with mu, so modes are visited in order.
    const auto& b = base.ball();
    for (int m = 0; static_cast<int>(out.values.size()) < l_max; ++m) {
        const double mu = static_cast<double>(m) * (m + b.dim - 2) / (b.radius * b.radius);
        const double sigma = dtn_eigenvalues(assemble({base, h, mesh, fiber_dim, lambda, mu}))[0];
        const auto mult = spherical_harmonic_dimension(b.dim, m);
        for (long long c = 0; c < mult && static_cast<int>(out.values.size()) < l_max; ++c)
            out.values.push_back({sigma, m});
    }
    return out;
}

AuxSpectrum aux_spectrum(const BaseDomain& base, const WarpingFunction& h, int fiber_dim, double lambda,
                         int l_max, int mesh_elements) {
    return aux_spectrum(base, h, fiber_dim, lambda, l_max, adapted_mesh(base, mesh_elements, h));
}

double rayleigh_quotient(std::span<const double> a, const BaseDomain& base, const WarpingFunction& h,
                         const Mesh& mesh, int fiber_dim, double lambda, double mu) {
    if (static_cast<int>(a.size()) != mesh.elements() + 1)
        throw std::invalid_argument("rayleigh_quotient: trial function size does not match the mesh");
    const auto f = assemble({base, h, mesh, fiber_dim, lambda, mu});
    if (f.origin_pinned && a[0] != 0.0)
        throw std::invalid_argument("rayleigh_quotient: mode with mu > 0 requires a(0) = 0");
    double den = 0.0;
    for (int b : f.boundary_dofs) den += f.boundary[b] * a[b] * a[b];
    if (!(den > 0.0)) throw std::domain_error("rayleigh_quotient: trial function vanishes on the boundary");
    // Sum of c_e (a_e - a_{e+1})^2 + r_i a_i^2: the same form without cancellation.
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) num += f.row_sum[i] * a[i] * a[i];
    for (std::size_t e = 0; e + 1 < a.size(); ++e) num -= f.energy.off[e] * (a[e] - a[e + 1]) * (a[e] - a[e + 1]);
    return num / den;
}

void dump_tridiagonal(std::ostream& out, const Tridiagonal& t) {
    const auto old = out.precision(17);
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double sub = i > 0 ? t.off[i - 1] : 0.0;
        const double sup = i + 1 < n ? t.off[i] : 0.0;
        out << sub << ' ' << t.diag[i] << ' ' << sup << '\n';
    }
    out.precision(old);
}

}  // namespace steklov
