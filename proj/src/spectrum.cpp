#include "steklov/spectrum.hpp"

#include "steklov/report_io.hpp"
#include "steklov/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <set>
#include <tuple>

namespace steklov {

SteklovSpectrum::SteklovSpectrum(BaseDomain base, Mesh mesh, int fiber_dim, int truncation, bool certified,
                                 std::vector<SpectrumEntry> entries)
    : base_(std::move(base)),
      mesh_(std::move(mesh)),
      fiber_dim_(fiber_dim),
      truncation_(truncation),
      certified_(certified),
      entries_(std::move(entries)) {}

std::vector<SpectrumRow> SteklovSpectrum::rows() const {
    std::vector<SpectrumRow> out;
    int k = 0;
    for (const auto& e : entries_)
        for (int c = 0; c < e.multiplicity; ++c) out.push_back({k++, e.sigma, e.j, e.l, e.lambda, e.multiplicity});
    return out;
}

const SpectrumEntry& SteklovSpectrum::entry_for(int k) const {
    if (!certified_) throw CertificationError("spectrum is not certified");
    if (k < 0 || k > truncation_)
        throw std::out_of_range("sigma_k: index " + std::to_string(k) + " beyond truncation K=" +
                                std::to_string(truncation_));
    int seen = 0;
    for (const auto& e : entries_) {
        seen += e.multiplicity;
        if (seen > k) return e;
    }
    throw std::out_of_range("sigma_k: index beyond computed entries");
}

namespace {

/// Lazily solved auxiliary spectrum of one fiber eigenvalue.
class AuxRow {
  public:
    AuxRow(const BaseDomain& base, const WarpingFunction& h, const Mesh& mesh, int fiber_dim, double lambda)
        : base_(base), h_(h), mesh_(mesh), fiber_dim_(fiber_dim), lambda_(lambda) {}

    /// Number of aux indices that exist at all (2 for an interval, unbounded for a ball).
    bool exists(int l) const { return base_.is_ball() || l < 2; }

    std::pair<double, int> at(int l) {
        while (static_cast<int>(sigma_.size()) <= l) extend();
        return {sigma_[l], label_[l]};
    }

  private:
    void extend() {
        if (base_.is_interval()) {
            const auto aux = aux_spectrum(base_, h_, fiber_dim_, lambda_, 2, mesh_);
            for (const auto& v : aux.values) {
                sigma_.push_back(v.sigma);
                label_.push_back(v.label);
            }
            return;
        }
        const auto& b = base_.ball();
        const int m = next_mode_++;
        const double mu = static_cast<double>(m) * (m + b.dim - 2) / (b.radius * b.radius);
        const double s = dtn_eigenvalues(assemble({base_, h_, mesh_, fiber_dim_, lambda_, mu}))[0];
        const auto mult = spherical_harmonic_dimension(b.dim, m);
        for (long long c = 0; c < mult; ++c) {
            sigma_.push_back(s);
            label_.push_back(m);
        }
    }

    const BaseDomain& base_;
    const WarpingFunction& h_;
    const Mesh& mesh_;
    int fiber_dim_;
    double lambda_;
    int next_mode_ = 0;
    std::vector<double> sigma_;
    std::vector<int> label_;
};

struct Cell {
    double sigma;
    int j;
    int l;

    // Min-heap order: sigma, then lexicographic (j, l).
    bool operator>(const Cell& o) const { return std::tie(sigma, j, l) > std::tie(o.sigma, o.j, o.l); }
};

}  // namespace

SteklovSpectrum steklov_spectrum(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber,
                                 int K, const Mesh& mesh, const SpectrumOptions& options) {
    if (K < 1) throw std::invalid_argument("steklov_spectrum: K must be >= 1");
    if (mesh.elements() < kMinSolverElements)
        throw std::invalid_argument("steklov_spectrum: mesh must have at least 8 elements");
    h.validate(base);

    const auto fiber_ev = fiber_eigenvalues(fiber, options.j_max);
    std::vector<AuxRow> rows;
    rows.reserve(fiber_ev.size());
    for (const auto& ev : fiber_ev) rows.emplace_back(base, h, mesh, fiber.dim(), ev.value);

    std::priority_queue<Cell, std::vector<Cell>, std::greater<>> heap;
    std::vector<SpectrumEntry> entries;
    // Cells whose predecessor was popped but that lie outside the budget.
    int open_cells = 0;
    std::string open_reason;

    auto push = [&](int j, int l) {
        if (j >= static_cast<int>(rows.size())) {
            ++open_cells;
            open_reason = "fiber eigenvalue budget j_max=" + std::to_string(options.j_max) + " exhausted";
            return;
        }
        if (!rows[j].exists(l)) return;
        if (l >= options.l_max) {
            ++open_cells;
            open_reason = "aux index budget l_max=" + std::to_string(options.l_max) + " exhausted";
            return;
        }
        heap.push({rows[j].at(l).first, j, l});
    };

    push(0, 0);
    int count = 0;
    double sigma_K = 0.0;
    bool certified = false;
    while (true) {
        if (count >= K + 1) {
            const bool heap_clear = heap.empty() || heap.top().sigma > sigma_K + options.certify_margin;
            if (heap_clear) {
                if (open_cells > 0)
                    throw CertificationError("cannot certify sigma_" + std::to_string(K) + ": " + open_reason);
                certified = true;
                break;
            }
        }
        if (heap.empty()) {
            throw CertificationError("cannot certify sigma_" + std::to_string(K) + ": " +
                                     (open_reason.empty() ? std::string("spectrum exhausted") : open_reason));
        }
        const Cell c = heap.top();
        heap.pop();
        const auto [sigma, label] = rows[c.j].at(c.l);
        const double lambda = fiber_ev[c.j].value;
        const int mult = fiber_ev[c.j].multiplicity;
        entries.push_back({sigma, c.j, c.l, lambda, mult, label});
        const int before = count;
        count += mult;
        if (before <= K && count > K) sigma_K = sigma;
        push(c.j, c.l + 1);
        if (c.l == 0) push(c.j + 1, 0);
    }
    // sigma_0 = 0 exactly: constants are harmonic with zero normal derivative.
    if (!entries.empty() && entries.front().j == 0 && entries.front().l == 0) entries.front().sigma = 0.0;
    return SteklovSpectrum(base, mesh, fiber.dim(), K, certified, std::move(entries));
}

SteklovSpectrum steklov_spectrum(const BaseDomain& base, const WarpingFunction& h, const FiberSpectrum& fiber,
                                 int K, int mesh_elements, const SpectrumOptions& options) {
    return steklov_spectrum(base, h, fiber, K, adapted_mesh(base, mesh_elements, h), options);
}

double sigma_k(const SteklovSpectrum& spec, int k) { return spec.entry_for(k).sigma; }

BoundReport check_kcompk0(const SteklovSpectrum& spec, const WarpingFunction& h, const FiberSpectrum& fiber,
                          int k) {
    const double lhs = sigma_k(spec, k);
    const double lambda_k = fiber_lambda_k(fiber, k);
    const double rhs = (k == 0) ? 0.0
                                : aux_spectrum(spec.base(), h, fiber.dim(), lambda_k, 1, spec.mesh()).values[0].sigma;
    const double tol = 1e-10 * std::max(1.0, std::abs(rhs));
    return make_report("kcompk0", k, lhs, rhs, false, tol);
}

void write_spectrum_csv(std::ostream& out, const SteklovSpectrum& spec) {
    CsvTable t({"k", "sigma", "j", "l", "lambda_j", "multiplicity"});
    for (const auto& r : spec.rows()) {
        if (r.k > spec.truncation()) break;
        t.row().cell(r.k).cell(r.sigma).cell(r.j).cell(r.l).cell(r.lambda).cell(r.multiplicity);
    }
    out << t.str();
}

}  // namespace steklov
