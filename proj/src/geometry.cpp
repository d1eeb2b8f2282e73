#include "steklov/geometry.hpp"

#include "steklov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace steklov {

// ---------------------------------------------------------------------------
// BaseDomain
// ---------------------------------------------------------------------------

BaseDomain::BaseDomain(Interval iv) : kind_(iv) {
    if (!(iv.length > 0.0) || !std::isfinite(iv.length))
        throw std::invalid_argument("Interval: length must be positive");
}

BaseDomain::BaseDomain(Ball b) : kind_(b) {
    if (b.dim < 2) throw std::invalid_argument("Ball: dimension must be >= 2");
    if (!(b.radius > 0.0) || !std::isfinite(b.radius))
        throw std::invalid_argument("Ball: radius must be positive");
}

int BaseDomain::dim() const { return is_interval() ? 1 : ball().dim; }

double BaseDomain::extent() const { return is_interval() ? interval().length : ball().radius; }

double BaseDomain::inradius() const { return is_interval() ? interval().length / 2.0 : ball().radius; }

std::vector<double> BaseDomain::boundary_points() const {
    if (is_interval()) return {0.0, interval().length};
    return {ball().radius};
}

double BaseDomain::volume_density(double x) const {
    if (is_interval()) return 1.0;
    const auto& b = ball();
    return unit_sphere_area(b.dim) * std::pow(x, b.dim - 1);
}

double BaseDomain::boundary_weight() const {
    if (is_interval()) return 1.0;
    return volume_density(ball().radius);
}

std::string BaseDomain::describe() const {
    std::ostringstream os;
    if (is_interval())
        os << "Interval{L=" << interval().length << "}";
    else
        os << "Ball{d=" << ball().dim << ",R=" << ball().radius << "}";
    return os.str();
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

double volume(const BaseDomain& base) {
    if (base.is_interval()) return base.interval().length;
    const auto& b = base.ball();
    return unit_ball_volume(b.dim) * std::pow(b.radius, b.dim);
}

double boundary_area(const BaseDomain& base) {
    if (base.is_interval()) return 2.0;
    const auto& b = base.ball();
    return unit_sphere_area(b.dim) * std::pow(b.radius, b.dim - 1);
}

// ---------------------------------------------------------------------------
// Fibers
// ---------------------------------------------------------------------------

FiberSpectrum FiberSpectrum::circle(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle fiber: radius must be positive");
    FiberSpectrum f;
    f.kind_ = Kind::circle;
    f.dim_ = 1;
    f.radius_ = radius;
    return f;
}

FiberSpectrum FiberSpectrum::sphere(int n) {
    if (n < 1) throw std::invalid_argument("sphere fiber: dimension must be >= 1");
    FiberSpectrum f;
    f.kind_ = Kind::sphere;
    f.dim_ = n;
    return f;
}

FiberSpectrum FiberSpectrum::torus(std::vector<double> lengths) {
    if (lengths.empty()) throw std::invalid_argument("torus fiber: at least one lattice length required");
    for (double l : lengths)
        if (!(l > 0.0)) throw std::invalid_argument("torus fiber: lattice lengths must be positive");
    FiberSpectrum f;
    f.kind_ = Kind::torus;
    f.dim_ = static_cast<int>(lengths.size());
    f.lengths_ = std::move(lengths);
    return f;
}

FiberSpectrum FiberSpectrum::explicit_list(int n, std::vector<EigenvalueMult> eigenvalues) {
    if (n < 1) throw std::invalid_argument("explicit fiber: dimension must be >= 1");
    if (eigenvalues.empty() || eigenvalues.front().value != 0.0 || eigenvalues.front().multiplicity != 1)
        throw std::invalid_argument("explicit fiber: spectrum must start with (0, 1) (connected fiber)");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i].multiplicity < 1)
            throw std::invalid_argument("explicit fiber: multiplicities must be positive");
        if (eigenvalues[i].value < 0.0 || !std::isfinite(eigenvalues[i].value))
            throw std::invalid_argument("explicit fiber: eigenvalues must be finite and >= 0");
        if (i > 0 && !(eigenvalues[i].value > eigenvalues[i - 1].value))
            throw std::invalid_argument("explicit fiber: distinct eigenvalues must increase strictly");
    }
    FiberSpectrum f;
    f.kind_ = Kind::explicit_list;
    f.dim_ = n;
    f.explicit_ = std::move(eigenvalues);
    return f;
}

std::string FiberSpectrum::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::circle: os << "circle(radius=" << radius_ << ")"; break;
        case Kind::sphere: os << "sphere(n=" << dim_ << ")"; break;
        case Kind::torus: os << "torus(n=" << dim_ << ")"; break;
        case Kind::explicit_list: os << "explicit(n=" << dim_ << ")"; break;
    }
    return os.str();
}

namespace {

long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<EigenvalueMult> torus_eigenvalues(const std::vector<double>& lengths, int count) {
    const int n = static_cast<int>(lengths.size());
    const double lmax = *std::max_element(lengths.begin(), lengths.end());
    for (int reach = 2;; reach *= 2) {
        std::map<double, int> grouped;
        std::vector<int> m(n, -reach);
        while (true) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) {
                const double w = 2.0 * std::numbers::pi * m[i] / lengths[i];
                v += w * w;
            }
            grouped[v] += 1;
            int i = 0;
            while (i < n && m[i] == reach) m[i++] = -reach;
            if (i == n) break;
            ++m[i];
        }
        // Merge values that differ only by rounding.
        std::vector<EigenvalueMult> out;
        for (const auto& [v, mult] : grouped) {
            if (!out.empty() && std::abs(v - out.back().value) <= 1e-12 * std::max(1.0, v))
                out.back().multiplicity += mult;
            else
                out.push_back({v, mult});
        }
        // Every lattice point outside the box has value >= (2 pi (reach+1) / lmax)^2.
        const double complete_below = std::pow(2.0 * std::numbers::pi * (reach + 1) / lmax, 2);
        if (static_cast<int>(out.size()) >= count && out[count - 1].value < complete_below) {
            out.resize(count);
            out.front().value = 0.0;
            return out;
        }
    }
}

}  // namespace

long long spherical_harmonic_dimension(int d, int m) {
    if (m < 0) return 0;
    if (d == 2) return m == 0 ? 1 : 2;
    return binomial(m + d - 1, d - 1) - binomial(m + d - 3, d - 1);
}

std::vector<EigenvalueMult> fiber_eigenvalues(const FiberSpectrum& fiber, int count) {
    if (count < 1) throw std::invalid_argument("fiber_eigenvalues: count must be >= 1");
    std::vector<EigenvalueMult> out;
    switch (fiber.kind_) {
        case FiberSpectrum::Kind::circle:
            for (int m = 0; m < count; ++m) {
                const double w = m / fiber.radius_;
                out.push_back({w * w, m == 0 ? 1 : 2});
            }
            break;
        case FiberSpectrum::Kind::sphere: {
            const int n = fiber.dim_;
            for (int l = 0; l < count; ++l)
                out.push_back({static_cast<double>(l) * (l + n - 1),
                               static_cast<int>(spherical_harmonic_dimension(n + 1, l))});
            break;
        }
        case FiberSpectrum::Kind::torus:
            out = torus_eigenvalues(fiber.lengths_, count);
            break;
        case FiberSpectrum::Kind::explicit_list:
            out.assign(fiber.explicit_.begin(),
                       fiber.explicit_.begin() + std::min<std::size_t>(count, fiber.explicit_.size()));
            break;
    }
    return out;
}

double fiber_lambda_k(const FiberSpectrum& fiber, int k) {
    if (k < 0) throw std::invalid_argument("fiber_lambda_k: k must be >= 0");
    for (int count = 8;; count *= 2) {
        const auto ev = fiber_eigenvalues(fiber, count);
        int seen = 0;
        for (const auto& e : ev) {
            seen += e.multiplicity;
            if (seen > k) return e.value;
        }
        if (static_cast<int>(ev.size()) < count)
            throw std::out_of_range("fiber_lambda_k: index beyond the known fiber spectrum");
    }
}

std::vector<EigenvalueMult> boundary_harmonics(const BaseDomain& base, int count) {
    if (count < 1) throw std::invalid_argument("boundary_harmonics: count must be >= 1");
    if (base.is_interval()) return {{0.0, 2}};
    const auto& b = base.ball();
    std::vector<EigenvalueMult> out;
    for (int m = 0; m < count; ++m)
        out.push_back({static_cast<double>(m) * (m + b.dim - 2) / (b.radius * b.radius),
                       static_cast<int>(spherical_harmonic_dimension(b.dim, m))});
    return out;
}

// ---------------------------------------------------------------------------
// WarpingFunction
// ---------------------------------------------------------------------------

WarpingFunction WarpingFunction::constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("warping function: constant must be positive");
    WarpingFunction h;
    h.preset_ = Preset::constant;
    h.exact_ = [value](double) { return value; };
    return h;
}

WarpingFunction WarpingFunction::ramp(double at_zero, double at_extent, double extent) {
    auto h = piecewise_linear({0.0, extent}, {at_zero, at_extent}, Preset::ramp);
    return h;
}

WarpingFunction WarpingFunction::piecewise_linear(std::vector<double> knots, std::vector<double> values,
                                                  Preset preset) {
    if (knots.size() != values.size() || knots.size() < 2)
        throw std::invalid_argument("warping function: need at least two (knot, value) pairs");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
            throw std::invalid_argument("warping function: non-finite sample");
        if (!(values[i] > 0.0)) throw std::invalid_argument("warping function: samples must be positive");
        if (i > 0 && !(knots[i] > knots[i - 1]))
            throw std::invalid_argument("warping function: knots must increase strictly");
    }
    WarpingFunction h;
    h.preset_ = preset;
    h.knots_ = std::move(knots);
    h.values_ = std::move(values);
    return h;
}

WarpingFunction WarpingFunction::from_function(Evaluator f, double extent, int samples, Preset preset) {
    if (samples < 1) throw std::invalid_argument("warping function: samples must be >= 1");
    std::vector<double> xs(samples + 1);
    std::vector<double> ys(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        xs[i] = extent * i / samples;
        ys[i] = f(xs[i]);
    }
    auto h = piecewise_linear(std::move(xs), std::move(ys), preset);
    h.exact_ = std::move(f);
    return h;
}

double WarpingFunction::operator()(double x) const {
    if (exact_) return exact_(x);
    if (x <= knots_.front()) return values_.front();
    if (x >= knots_.back()) return values_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    const double t = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

WarpingFunction WarpingFunction::with_evaluator(Evaluator f) const {
    WarpingFunction h = *this;
    h.exact_ = std::move(f);
    return h;
}

WarpingFunction WarpingFunction::with_refine_zones(std::vector<RefineZone> zones) const {
    WarpingFunction h = *this;
    h.zones_ = std::move(zones);
    return h;
}

void WarpingFunction::validate(const BaseDomain& base) const {
    const double ext = base.extent();
    if (!knots_.empty()) {
        const double slack = 1e-12 * ext;
        if (knots_.front() > slack || knots_.back() < ext - slack)
            throw std::invalid_argument("warping function: samples do not span the base coordinate [0, " +
                                        std::to_string(ext) + "]");
    }
    if (!(min_on(base) > 0.0)) throw std::invalid_argument("warping function: h must be positive on the base");
}

std::vector<double> WarpingFunction::boundary_trace(const BaseDomain& base) const {
    std::vector<double> out;
    for (double x : base.boundary_points()) out.push_back((*this)(x));
    return out;
}

bool WarpingFunction::is_normalised(const BaseDomain& base, double tol) const {
    for (double v : boundary_trace(base))
        if (std::abs(v - 1.0) > tol) return false;
    return true;
}

double WarpingFunction::max_on(const BaseDomain& base, int probes) const {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= probes; ++i) m = std::max(m, (*this)(base.extent() * i / probes));
    for (double k : knots_) m = std::max(m, (*this)(k));
    return m;
}

double WarpingFunction::min_on(const BaseDomain& base, int probes) const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= probes; ++i) m = std::min(m, (*this)(base.extent() * i / probes));
    for (double k : knots_) m = std::min(m, (*this)(k));
    return m;
}

WarpingFunction load_warping(std::istream& in, const BaseDomain& base) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x = 0.0;
        double y = 0.0;
        std::string rest;
        if (!(ls >> x)) {
            ls.clear();
            if (ls >> rest)
                throw std::invalid_argument("warping file line " + std::to_string(lineno) +
                                            ": expected two numeric columns");
            continue;
        }
        if (!(ls >> y) || (ls >> rest))
            throw std::invalid_argument("warping file line " + std::to_string(lineno) +
                                        ": expected two numeric columns");
        xs.push_back(x);
        ys.push_back(y);
    }
    auto h = WarpingFunction::piecewise_linear(std::move(xs), std::move(ys));
    h.validate(base);
    return h;
}

WarpingFunction load_warping_file(const std::string& path, const BaseDomain& base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open warping file: " + path);
    return load_warping(in, base);
}

// ---------------------------------------------------------------------------
// Meshes and integrals
// ---------------------------------------------------------------------------

Mesh uniform_mesh(const BaseDomain& base, int elements) {
    if (elements < 1) throw std::invalid_argument("mesh: element count must be >= 1");
    Mesh m;
    m.nodes.resize(elements + 1);
    const double ext = base.extent();
    for (int i = 0; i <= elements; ++i) m.nodes[i] = ext * i / elements;
    m.nodes.back() = ext;
    return m;
}

Mesh adapted_mesh(const BaseDomain& base, int elements, const WarpingFunction& h,
                  const std::vector<RefineZone>& extra_zones) {
    const double ext = base.extent();
    const double h0 = ext / elements;
    std::vector<double> pts = uniform_mesh(base, elements).nodes;
    std::vector<RefineZone> zones = h.refine_zones();
    zones.insert(zones.end(), extra_zones.begin(), extra_zones.end());
    for (double k : h.knots())
        if (k > 0.0 && k < ext) pts.push_back(k);
    for (const auto& z : zones) {
        if (z.lo > 0.0 && z.lo < ext) pts.push_back(z.lo);
        if (z.hi > 0.0 && z.hi < ext) pts.push_back(z.hi);
    }
    std::sort(pts.begin(), pts.end());
    // Drop near-duplicates produced by knots landing on grid nodes.
    const double snap = 1e-9 * ext;
    std::vector<double> merged;
    for (double p : pts)
        if (merged.empty() || p - merged.back() > snap) merged.push_back(p);
    merged.back() = ext;

    Mesh m;
    m.nodes.push_back(merged.front());
    for (std::size_t i = 1; i < merged.size(); ++i) {
        const double a = merged[i - 1];
        const double b = merged[i];
        double target = h0;
        for (const auto& z : zones) {
            if (b <= z.lo || a >= z.hi || z.min_elements <= 0) continue;
            target = std::min(target, (z.hi - z.lo) / z.min_elements);
        }
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / target - 1e-9)));
        for (int p = 1; p < pieces; ++p) m.nodes.push_back(a + (b - a) * p / pieces);
        m.nodes.push_back(b);
    }
    return m;
}

double integrate_on_mesh(const BaseDomain& base, const Mesh& mesh, const std::function<double(double)>& g,
                         int points, double lo, double hi) {
    const auto rule = gauss_legendre(points);
    double total = 0.0;
    for (int e = 0; e < mesh.elements(); ++e) {
        const double a = std::max(lo, mesh.nodes[e]);
        const double b = std::min(hi, mesh.nodes[e + 1]);
        if (!(b > a)) continue;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = mid + half * rule.nodes[q];
            acc += rule.weights[q] * g(x) * base.volume_density(x);
        }
        total += half * acc;
    }
    return total;
}

double weighted_volume_integral(const BaseDomain& base, const WarpingFunction& h, double s, int mesh_elements) {
    const Mesh mesh = adapted_mesh(base, mesh_elements, h);
    const int points = gauss_points_for_power(s, base.dim() - 1);
    const double value = integrate_on_mesh(
        base, mesh,
        [&](double x) {
            const double hv = h(x);
            if (!(hv > 0.0)) throw std::domain_error("weighted_volume_integral: h must be positive");
            const double v = std::pow(hv, s);
            if (!std::isfinite(v))
                throw std::domain_error("weighted_volume_integral: h^s overflows (h too close to 0 for s < 0)");
            return v;
        },
        points, 0.0, base.extent());
    return value;
}

double weighted_boundary_integral(const BaseDomain& base, const WarpingFunction& h, double s) {
    double total = 0.0;
    for (double v : h.boundary_trace(base)) total += std::pow(v, s) * base.boundary_weight();
    return total;
}

double lp_norm(const BaseDomain& base, const WarpingFunction& h, double p, int mesh_elements) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    return std::pow(weighted_volume_integral(base, h, p, mesh_elements), 1.0 / p);
}

}  // namespace steklov
