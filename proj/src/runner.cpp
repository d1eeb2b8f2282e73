#include "steklov/bounds.hpp"
#include "steklov/config.hpp"
#include "steklov/families.hpp"
#include "steklov/report_io.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/sturm.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

namespace steklov {
namespace {

using ojson = nlohmann::ordered_json;

struct Context {
    const RunConfig& config;
    const BaseDomain& base;
    const FiberSpectrum& fiber;
    SolveSettings settings;
    int workers;
    std::string dir;
    std::ostream& out;
    bool quiet;

    void say(const std::string& line) const {
        if (!quiet) out << line << '\n';
    }
    std::string write(const std::string& name, const std::string& content) const {
        const auto path = (std::filesystem::path(dir) / name).string();
        write_file_atomic(path, content);
        say("wrote " + path);
        return path;
    }
};

std::string verdict_line(const BoundReport& r) {
    std::string tag = r.observational ? "NOTE" : (r.pass ? "PASS" : "FAIL");
    std::string s = tag + "  " + r.name + " k=" + std::to_string(r.k) + "  lhs=" + format_number(r.lhs) +
                    (r.strict ? " < " : " <= ") + "rhs=" + format_number(r.rhs) + "  margin=" + format_number(r.margin) +
                    "  tol=" + format_number(r.tol);
    if (!r.note.empty()) s += "  (" + r.note + ")";
    return s;
}

ojson header(const Context& c) {
    ojson j;
    j["command"] = to_string(c.config.command);
    j["base"] = c.base.describe();
    j["fiber"] = c.fiber.describe();
    j["mesh_N"] = c.settings.mesh_elements;
    return j;
}

int finish(const Context& c, const std::vector<BoundReport>& reports, ojson doc) {
    ojson arr = ojson::array();
    bool ok = true;
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        c.say(verdict_line(r));
        if (!r.observational && !r.pass) ok = false;
    }
    doc["reports"] = arr;
    doc["status"] = ok ? "pass" : "fail";
    c.write("bounds.json", doc.dump(2) + "\n");
    c.write("bounds.csv", bounds_csv(reports));
    return ok ? kExitOk : kExitAssertionFailed;
}

int assert_flags(const Context& c, const std::vector<std::pair<std::string, bool>>& flags) {
    bool ok = true;
    for (const auto& [name, value] : flags) {
        c.say(std::string(value ? "PASS  " : "FAIL  ") + name);
        ok = ok && value;
    }
    return ok ? kExitOk : kExitAssertionFailed;
}

int run_spectrum(const Context& c) {
    const auto h = build_warping(c.config);
    const auto spec = steklov_spectrum(c.base, h, c.fiber, c.config.K, c.settings.mesh_elements, c.settings.spectrum);
    std::ostringstream csv;
    write_spectrum_csv(csv, spec);
    for (const auto& r : spec.rows()) {
        if (r.k > spec.truncation()) break;
        c.say("sigma_" + std::to_string(r.k) + " = " + format_number(r.sigma) + "  (j=" + std::to_string(r.j) +
              ", l=" + std::to_string(r.l) + ")");
    }
    c.write("spectrum.csv", csv.str());
    return kExitOk;
}

int run_bounds(const Context& c) {
    const auto& cfg = c.config;
    const auto h = build_warping(cfg);
    const int k = cfg.k;
    std::vector<BoundReport> reports;
    ojson doc = header(c);
    doc["k"] = k;
    for (const auto& check : cfg.checks) {
        if (check == "basic") {
            reports.push_back(bound_basic(c.base, h, c.fiber, k, c.settings));
        } else if (check == "kcompk0") {
            const auto spec = steklov_spectrum(c.base, h, c.fiber, std::max(k, 1), c.settings.mesh_elements,
                                               c.settings.spectrum);
            reports.push_back(check_kcompk0(spec, h, c.fiber, k));
        } else if (check == "lp") {
            reports.push_back(bound_lp(c.base, h, c.fiber, k, *cfg.p, c.settings));
        } else if (check == "const_chain") {
            const auto [a, b] = bound_const_chain(c.base, h, c.fiber, k, *cfg.C, c.settings);
            reports.push_back(a);
            reports.push_back(b);
        } else if (check == "interval") {
            const auto r = bound_interval(h, c.fiber, k, *cfg.p, c.base.extent(), c.settings);
            reports.push_back(r.general);
            if (r.first) reports.push_back(*r.first);
        } else if (check == "improved") {
            const double centre = cfg.q.value_or(c.base.is_interval() ? c.base.extent() / 2.0 : 0.0);
            const Subdomain D{centre, cfg.r.value_or(c.base.inradius() / 2.0)};
            const auto ib = improved_bound(c.base, h, c.fiber, k, D, distance_profile(c.base, D), c.settings);
            auto r = ib.report;
            r.note = "t0=" + format_number(ib.t0) + ", basic rhs=" + format_number(ib.basic_rhs);
            reports.push_back(r);
        }
    }
    return finish(c, reports, std::move(doc));
}

int run_asymptotics(const Context& c) {
    const auto t = const_asymptotics(c.base, c.fiber, c.config.k, c.config.C_list, c.settings, c.workers);
    CsvTable csv({"C", "sigma", "scaled", "limit", "deviation", "ratio"});
    for (const auto& r : t.rows) {
        csv.row().cell(r.C).cell(r.sigma).cell(r.scaled).cell(r.limit).cell(r.deviation).cell(r.ratio);
        c.say("C=" + format_number(r.C) + "  C^2 sigma=" + format_number(r.scaled) +
              "  deviation=" + format_number(r.deviation) + "  ratio=" + format_number(r.ratio));
    }
    c.write("sweep.csv", csv.str());
    return assert_flags(c, {{"deviation from the limit decreases", t.deviations_decrease}});
}

int run_saturate(const Context& c) {
    const auto t = saturation_sweep(c.base, c.fiber, c.config.k, c.config.C_list, c.config.delta_list, c.settings,
                                    c.workers);
    CsvTable csv({"C", "delta", "sigma", "limit", "ceiling", "ratio_to_ceiling", "tol"});
    for (const auto& r : t.rows) {
        csv.row().cell(r.C).cell(r.delta).cell(r.sigma).cell(r.limit).cell(r.ceiling).cell(r.sigma / r.ceiling).cell(
            r.tol);
        c.say("C=" + format_number(r.C) + " delta=" + format_number(r.delta) + "  sigma=" + format_number(r.sigma) +
              "  C^n sigma(M_C)=" + format_number(r.limit) + "  ceiling=" + format_number(r.ceiling));
    }
    c.write("sweep.csv", csv.str());
    return assert_flags(c, {{"monotone as delta decreases", t.monotone},
                            {"strictly below lambda_k |Omega| / |dOmega|", t.below_ceiling}});
}

int run_blowup(const Context& c) {
    const auto& cfg = c.config;
    const auto eps = cfg.eps_list.empty() ? default_eps_list(c.base) : cfg.eps_list;
    const auto t = blowup_sweep(c.base, c.fiber, *cfg.p, *cfg.budget, eps, c.settings, c.workers, cfg.floor);
    CsvTable csv({"eps", "peak", "p_integral", "budget", "sigma", "growth", "ceiling_n2"});
    for (const auto& r : t.rows) {
        csv.row().cell(r.eps).cell(r.peak).cell(r.p_integral).cell(t.budget).cell(r.sigma).cell(r.growth).cell(
            t.ceiling);
        c.say("eps=" + format_number(r.eps) + "  peak=" + format_number(r.peak) +
              "  int h^p=" + format_number(r.p_integral) + "  sigma_1=" + format_number(r.sigma) +
              "  growth=" + format_number(r.growth));
    }
    c.write("sweep.csv", csv.str());
    return assert_flags(c, {{"integral of h^p within budget", t.within_budget},
                            {"sigma_1 strictly grows as eps decreases", t.strictly_growing}});
}

int run_stability(const Context& c) {
    const auto& cfg = c.config;
    const auto h = build_warping(cfg);
    const double q = cfg.q.value_or(c.base.is_interval() ? c.base.extent() / 2.0 : 0.0);
    const double r = cfg.r.value_or(c.base.inradius() / 2.0);
    const auto s = stability_report(c.base, h, c.fiber, cfg.k, q, r, c.settings);
    // Stored as rhs_expr <= integral of h^2 so that the common report shape applies.
    auto rep = make_report("stability", cfg.k, s.rhs, s.lhs, false, s.tol,
                           s.trivial ? "right-hand side negative: holds for every h" : "");
    ojson doc = header(c);
    doc["k"] = cfg.k;
    ojson detail;
    detail["q"] = s.q;
    detail["r"] = s.r;
    detail["sigma"] = std::stod(format_number(s.sigma));
    detail["deficit"] = std::stod(format_number(s.deficit));
    detail["integral_h2"] = std::stod(format_number(s.lhs));
    detail["estimate"] = std::stod(format_number(s.rhs));
    detail["trivial"] = s.trivial;
    doc["stability"] = detail;
    return finish(c, {rep}, std::move(doc));
}

int run_conformal(const Context& c) {
    const auto h = build_warping(c.config);
    const auto r = conformal_check(c.base.extent(), h, c.fiber, c.config.K + 1, c.settings);
    CsvTable csv({"k", "warped", "flat", "rel_error"});
    for (std::size_t k = 0; k < r.warped.size(); ++k) {
        const double err = r.flat[k] == 0.0 ? std::abs(r.warped[k]) : std::abs(r.warped[k] - r.flat[k]) / r.flat[k];
        csv.row().cell(static_cast<int>(k)).cell(r.warped[k]).cell(r.flat[k]).cell(err);
    }
    c.say("t(L)=" + format_number(r.t_L) + "  max relative error=" + format_number(r.max_rel_error));
    c.write("sweep.csv", csv.str());
    return assert_flags(c, {{"spectra agree within " + format_number(r.tol), r.pass}});
}

}  // namespace

int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        SolveSettings settings;
        settings.mesh_elements = options.mesh.value_or(config.mesh_N);
        settings.min_tol = config.tol;
        if (settings.mesh_elements < kMinSolverElements)
            throw std::invalid_argument("mesh: at least 8 elements required");
        const Context c{config,
                        *config.base,
                        *config.fiber,
                        settings,
                        std::max(1, options.workers),
                        resolve_output_dir(options, config),
                        out,
                        options.quiet};
        c.say("command " + to_string(config.command) + " on " + c.base.describe() + " x " + c.fiber.describe() +
              ", mesh " + std::to_string(settings.mesh_elements));
        switch (config.command) {
            case Command::spectrum: return run_spectrum(c);
            case Command::bounds: return run_bounds(c);
            case Command::asymptotics: return run_asymptotics(c);
            case Command::saturate: return run_saturate(c);
            case Command::blowup: return run_blowup(c);
            case Command::stability: return run_stability(c);
            case Command::conformal: return run_conformal(c);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace steklov
