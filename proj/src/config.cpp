#include "steklov/config.hpp"

#include "steklov/families.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>

namespace steklov {

using json = nlohmann::json;

std::string to_string(Command c) {
    switch (c) {
        case Command::spectrum: return "spectrum";
        case Command::bounds: return "bounds";
        case Command::asymptotics: return "asymptotics";
        case Command::saturate: return "saturate";
        case Command::blowup: return "blowup";
        case Command::stability: return "stability";
        case Command::conformal: return "conformal";
    }
    return "?";
}

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string s = "invalid configuration:";
    for (const auto& e : errors) s += "\n  " + e;
    return s;
}

class Fields {
  public:
    Fields(const json& obj, std::string path, std::vector<std::string>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {}

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    void error(const std::string& key, const std::string& msg) const { errors_.push_back(at(key) + ": " + msg); }
    bool has(const std::string& key) const { return obj_.contains(key); }
    const json& raw(const std::string& key) const { return obj_.at(key); }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!ok.count(it.key())) error(it.key(), "unknown key");
    }

    std::optional<double> number(const std::string& key, bool required) const {
        if (!has(key)) {
            if (required) error(key, "missing");
            return std::nullopt;
        }
        const auto& v = raw(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            error(key, "must be a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<int> integer(const std::string& key, bool required) const {
        if (!has(key)) {
            if (required) error(key, "missing");
            return std::nullopt;
        }
        const auto& v = raw(key);
        if (!v.is_number_integer()) {
            error(key, "must be an integer");
            return std::nullopt;
        }
        const auto x = v.get<long long>();
        if (x < -1000000000LL || x > 1000000000LL) {
            error(key, "out of range");
            return std::nullopt;
        }
        return static_cast<int>(x);
    }

    std::optional<std::string> string(const std::string& key, bool required) const {
        if (!has(key)) {
            if (required) error(key, "missing");
            return std::nullopt;
        }
        if (!raw(key).is_string()) {
            error(key, "must be a string");
            return std::nullopt;
        }
        return raw(key).get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const std::string& key, bool required) const {
        if (!has(key)) {
            if (required) error(key, "missing");
            return std::nullopt;
        }
        const auto& v = raw(key);
        if (!v.is_array() || v.empty()) {
            error(key, "must be a non-empty array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                error(key + "[" + std::to_string(i) + "]", "must be a finite number");
                return std::nullopt;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::optional<Fields> object(const std::string& key, bool required) const {
        if (!has(key)) {
            if (required) error(key, "missing");
            return std::nullopt;
        }
        if (!raw(key).is_object()) {
            error(key, "must be an object");
            return std::nullopt;
        }
        return Fields(raw(key), at(key), errors_);
    }

  private:
    const json& obj_;
    std::string path_;
    std::vector<std::string>& errors_;
};

std::optional<BaseDomain> read_base(const Fields& f) {
    const auto kind = f.string("kind", true);
    if (!kind) return std::nullopt;
    try {
        if (*kind == "interval") {
            f.allow({"kind", "L"});
            const auto L = f.number("L", true);
            if (!L) return std::nullopt;
            if (!(*L > 0.0)) {
                f.error("L", "must be positive");
                return std::nullopt;
            }
            return BaseDomain(Interval{*L});
        }
        if (*kind == "ball") {
            f.allow({"kind", "d", "R"});
            const auto d = f.integer("d", true);
            const auto R = f.number("R", true);
            if (!d || !R) return std::nullopt;
            bool ok = true;
            if (*d < 2 || *d > 16) {
                f.error("d", "must lie in [2, 16]");
                ok = false;
            }
            if (!(*R > 0.0)) {
                f.error("R", "must be positive");
                ok = false;
            }
            if (!ok) return std::nullopt;
            return BaseDomain(Ball{*d, *R});
        }
    } catch (const std::exception& e) {
        f.error("kind", e.what());
        return std::nullopt;
    }
    f.error("kind", "must be one of interval, ball");
    return std::nullopt;
}

std::optional<FiberSpectrum> read_fiber(const Fields& f) {
    const auto kind = f.string("kind", true);
    if (!kind) return std::nullopt;
    try {
        if (*kind == "sphere") {
            f.allow({"kind", "n"});
            const auto n = f.integer("n", true);
            if (!n) return std::nullopt;
            if (*n < 1 || *n > 32) {
                f.error("n", "must lie in [1, 32]");
                return std::nullopt;
            }
            return FiberSpectrum::sphere(*n);
        }
        if (*kind == "circle") {
            f.allow({"kind", "radius"});
            const auto r = f.number("radius", false);
            if (r && !(*r > 0.0)) {
                f.error("radius", "must be positive");
                return std::nullopt;
            }
            return FiberSpectrum::circle(r.value_or(1.0));
        }
        if (*kind == "torus") {
            f.allow({"kind", "lengths"});
            const auto lengths = f.numbers("lengths", true);
            if (!lengths) return std::nullopt;
            for (double L : *lengths)
                if (!(L > 0.0)) {
                    f.error("lengths", "entries must be positive");
                    return std::nullopt;
                }
            return FiberSpectrum::torus(*lengths);
        }
        if (*kind == "explicit") {
            f.allow({"kind", "n", "eigenvalues"});
            const auto n = f.integer("n", true);
            std::vector<EigenvalueMult> list;
            bool ok = static_cast<bool>(n);
            if (n && *n < 1) {
                f.error("n", "must be >= 1");
                ok = false;
            }
            if (!f.has("eigenvalues")) {
                f.error("eigenvalues", "missing");
                return std::nullopt;
            }
            const auto& ev = f.raw("eigenvalues");
            if (!ev.is_array() || ev.empty()) {
                f.error("eigenvalues", "must be a non-empty array of [value, multiplicity] pairs");
                return std::nullopt;
            }
            for (std::size_t i = 0; i < ev.size(); ++i) {
                const auto& e = ev[i];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number_integer()) {
                    f.error("eigenvalues[" + std::to_string(i) + "]", "must be [value, multiplicity]");
                    return std::nullopt;
                }
                list.push_back({e[0].get<double>(), e[1].get<int>()});
            }
            if (!ok) return std::nullopt;
            return FiberSpectrum::explicit_list(*n, list);
        }
    } catch (const std::exception& e) {
        f.error("kind", e.what());
        return std::nullopt;
    }
    f.error("kind", "must be one of sphere, circle, torus, explicit");
    return std::nullopt;
}

std::optional<WarpingSpec> read_warping(const Fields& f) {
    const auto kind = f.string("kind", true);
    if (!kind) return std::nullopt;
    WarpingSpec w;
    auto positive = [&](const char* key, double& slot) {
        const auto v = f.number(key, true);
        if (!v) return false;
        if (!(*v > 0.0)) {
            f.error(key, "must be positive");
            return false;
        }
        slot = *v;
        return true;
    };
    if (*kind == "constant") {
        f.allow({"kind", "C"});
        w.kind = WarpingSpec::Kind::constant;
        return positive("C", w.C) ? std::optional(w) : std::nullopt;
    }
    if (*kind == "samples") {
        f.allow({"kind", "points"});
        w.kind = WarpingSpec::Kind::samples;
        if (!f.has("points")) {
            f.error("points", "missing");
            return std::nullopt;
        }
        const auto& pts = f.raw("points");
        if (!pts.is_array() || pts.size() < 2) {
            f.error("points", "must be an array of at least two [x, h] pairs");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& e = pts[i];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                f.error("points[" + std::to_string(i) + "]", "must be [x, h]");
                return std::nullopt;
            }
            w.points.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        return w;
    }
    if (*kind == "file") {
        f.allow({"kind", "path"});
        w.kind = WarpingSpec::Kind::file;
        const auto path = f.string("path", true);
        if (!path) return std::nullopt;
        if (!std::filesystem::exists(*path)) {
            f.error("path", "file does not exist: " + *path);
            return std::nullopt;
        }
        w.path = *path;
        return w;
    }
    if (*kind == "hdelta") {
        f.allow({"kind", "C", "delta"});
        w.kind = WarpingSpec::Kind::hdelta;
        bool ok = positive("C", w.C);
        ok = positive("delta", w.delta) && ok;
        if (ok && w.C < 1.0) {
            f.error("C", "must be >= 1");
            ok = false;
        }
        return ok ? std::optional(w) : std::nullopt;
    }
    if (*kind == "heps") {
        f.allow({"kind", "p", "budget", "eps", "floor"});
        w.kind = WarpingSpec::Kind::heps;
        bool ok = positive("p", w.p);
        ok = positive("budget", w.budget) && ok;
        ok = positive("eps", w.eps) && ok;
        if (const auto fl = f.number("floor", false)) w.floor = *fl;
        if (ok && w.p < 1.0) {
            f.error("p", "must be >= 1");
            ok = false;
        }
        return ok ? std::optional(w) : std::nullopt;
    }
    f.error("kind", "must be one of constant, samples, file, hdelta, heps");
    return std::nullopt;
}

const std::set<std::string> kChecks = {"basic", "kcompk0", "lp", "const_chain", "interval", "improved"};

void check_command(RunConfig& c, const Fields& top) {
    const bool have_base = c.base.has_value();
    const bool have_fiber = c.fiber.has_value();
    const int n = have_fiber ? c.fiber->dim() : 0;
    auto need = [&](bool cond, const std::string& key, const std::string& msg) {
        if (!cond) top.error(key, msg);
    };
    const std::string cmd = to_string(c.command);
    const bool family_command =
        c.command == Command::asymptotics || c.command == Command::saturate || c.command == Command::blowup;
    if (family_command && c.warping) top.error("warping", "not used by command '" + cmd + "'");
    if (c.warping && c.warping->kind == WarpingSpec::Kind::heps && have_base && !c.base->is_ball())
        top.error("warping.kind", "heps requires a ball base");

    switch (c.command) {
        case Command::spectrum: break;
        case Command::bounds: {
            if (!top.has("k")) top.error("k", "missing");
            if (c.checks.empty()) c.checks = {"basic", "kcompk0"};
            for (const auto& ch : c.checks) {
                if (!kChecks.count(ch)) {
                    top.error("checks", "unknown check '" + ch + "'");
                    continue;
                }
                if (c.k == 0 && ch != "basic" && ch != "kcompk0")
                    top.error("checks", "'" + ch + "' requires k >= 1");
                if (ch == "lp") {
                    if (have_fiber && n < 3) top.error("checks", "'lp' requires n >= 3 (fiber has n = " +
                                                                     std::to_string(n) + ")");
                    if (!c.p) top.error("p", "missing (required by check 'lp')");
                    else if (have_fiber && n >= 3 && *c.p < n - 2) top.error("p", "'lp' requires p >= n - 2");
                }
                if (ch == "interval") {
                    if (have_base && !c.base->is_interval()) top.error("checks", "'interval' requires an interval base");
                    if (have_fiber && n < 2) top.error("checks", "'interval' requires n >= 2");
                    if (!c.p) top.error("p", "missing (required by check 'interval')");
                    else if (*c.p < 1.0) top.error("p", "must be >= 1");
                }
                if (ch == "const_chain") {
                    if (!c.C) top.error("C", "missing (required by check 'const_chain')");
                    else if (*c.C < 1.0) top.error("C", "must be >= 1");
                }
            }
            break;
        }
        case Command::asymptotics:
            need(!c.C_list.empty(), "C_list", "missing");
            need(c.k >= 1, "k", "must be >= 1");
            for (std::size_t i = 0; i < c.C_list.size(); ++i) {
                if (!(c.C_list[i] > 0.0)) top.error("C_list", "entries must be positive");
                if (i > 0 && !(c.C_list[i] > c.C_list[i - 1])) top.error("C_list", "must increase");
            }
            break;
        case Command::saturate:
            need(!c.C_list.empty(), "C_list", "missing");
            need(!c.delta_list.empty(), "delta_list", "missing");
            need(c.k >= 1, "k", "must be >= 1");
            if (have_fiber && n != 2) top.error("fiber", "saturate requires n = 2");
            for (double C : c.C_list)
                if (C < 1.0) top.error("C_list", "entries must be >= 1");
            for (double d : c.delta_list)
                if (!(d > 0.0)) top.error("delta_list", "entries must be positive");
            break;
        case Command::blowup:
            if (have_base && !c.base->is_ball()) top.error("base", "blowup requires a ball base");
            if (!c.p) {
                top.error("p", "missing");
            } else {
                if (*c.p < 1.0) top.error("p", "must be >= 1");
                if (have_fiber && !(*c.p < n - 2)) top.error("p", "blowup requires p < n - 2");
            }
            need(c.budget.has_value(), "budget", "missing");
            if (c.budget && !(*c.budget > 0.0)) top.error("budget", "must be positive");
            need(c.floor <= 1.0, "floor", "must be <= 1");
            for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
                if (!(c.eps_list[i] > 0.0)) top.error("eps_list", "entries must be positive");
                if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1])) top.error("eps_list", "must decrease");
            }
            break;
        case Command::stability:
            if (have_fiber && n != 2) top.error("fiber", "stability requires n = 2");
            need(c.k >= 1, "k", "must be >= 1");
            if (c.r && !(*c.r > 0.0)) top.error("r", "must be positive");
            if (have_base && c.base->is_ball() && c.q && *c.q != 0.0)
                top.error("q", "ball bases support only the centre q = 0");
            break;
        case Command::conformal:
            if (have_base && !c.base->is_interval()) top.error("base", "conformal requires an interval base");
            if (have_fiber && c.fiber->kind() != FiberSpectrum::Kind::circle)
                top.error("fiber", "conformal requires a circle fiber (n = 1)");
            break;
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

Validation validate(const std::string& text) {
    Validation out;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        out.errors.push_back(std::string("config: invalid JSON: ") + e.what());
        return out;
    }
    if (!doc.is_object()) {
        out.errors.push_back("config: top level must be an object");
        return out;
    }
    auto& errors = out.errors;
    const Fields top(doc, "", errors);
    top.allow({"command", "base", "fiber", "warping", "k", "K", "p", "C", "C_list", "delta_list", "eps_list",
               "budget", "floor", "q", "r", "checks", "mesh_N", "tol", "output"});

    RunConfig c;
    const auto cmd = top.string("command", true);
    bool command_ok = false;
    if (cmd) {
        for (auto candidate : {Command::spectrum, Command::bounds, Command::asymptotics, Command::saturate,
                               Command::blowup, Command::stability, Command::conformal})
            if (to_string(candidate) == *cmd) {
                c.command = candidate;
                command_ok = true;
            }
        if (!command_ok)
            top.error("command",
                      "must be one of spectrum, bounds, asymptotics, saturate, blowup, stability, conformal");
    }

    if (const auto f = top.object("base", true)) c.base = read_base(*f);
    const bool fiber_required = !(command_ok && c.command == Command::conformal);
    if (const auto f = top.object("fiber", fiber_required)) c.fiber = read_fiber(*f);
    if (!top.has("fiber") && !fiber_required) c.fiber = FiberSpectrum::circle(1.0);
    if (const auto f = top.object("warping", false)) {
        c.warping = read_warping(*f);
        if (!c.warping) c.warping = WarpingSpec{};
    }

    if (const auto v = top.integer("k", false)) {
        if (*v < 0) top.error("k", "must be >= 0");
        c.k = *v;
    }
    if (const auto v = top.integer("K", false)) {
        if (*v < 1) top.error("K", "must be >= 1");
        c.K = *v;
    }
    c.p = top.number("p", false);
    c.C = top.number("C", false);
    if (auto v = top.numbers("C_list", false)) c.C_list = *v;
    if (auto v = top.numbers("delta_list", false)) c.delta_list = *v;
    if (auto v = top.numbers("eps_list", false)) c.eps_list = *v;
    c.budget = top.number("budget", false);
    if (const auto v = top.number("floor", false)) c.floor = *v;
    c.q = top.number("q", false);
    c.r = top.number("r", false);
    if (top.has("checks")) {
        const auto& v = top.raw("checks");
        if (!v.is_array()) {
            top.error("checks", "must be an array of strings");
        } else {
            for (const auto& e : v) {
                if (!e.is_string()) {
                    top.error("checks", "must be an array of strings");
                    break;
                }
                c.checks.push_back(e.get<std::string>());
            }
        }
    }
    if (const auto v = top.integer("mesh_N", false)) {
        if (*v < 8) top.error("mesh_N", "must be >= 8");
        c.mesh_N = *v;
    }
    if (const auto v = top.number("tol", false)) {
        if (!(*v > 0.0)) top.error("tol", "must be positive");
        c.tol = *v;
    }
    if (const auto v = top.string("output", false)) c.output = *v;

    if (command_ok) check_command(c, top);
    if (errors.empty()) out.config = std::move(c);
    return out;
}

RunConfig parse_config(const std::string& text) {
    auto v = validate(text);
    if (!v.errors.empty()) throw ConfigError(std::move(v.errors));
    return std::move(*v.config);
}

WarpingFunction build_warping(const RunConfig& config) {
    const auto& base = *config.base;
    if (!config.warping) return WarpingFunction::constant(1.0);
    const auto& w = *config.warping;
    switch (w.kind) {
        case WarpingSpec::Kind::constant: return WarpingFunction::constant(w.C);
        case WarpingSpec::Kind::samples: {
            std::vector<double> x;
            std::vector<double> y;
            for (const auto& [a, b] : w.points) {
                x.push_back(a);
                y.push_back(b);
            }
            auto h = WarpingFunction::piecewise_linear(x, y);
            h.validate(base);
            return h;
        }
        case WarpingSpec::Kind::file: return load_warping_file(w.path, base);
        case WarpingSpec::Kind::hdelta: return make_hdelta(base, w.C, w.delta);
        case WarpingSpec::Kind::heps: return make_heps(base, {w.p, w.budget, w.eps, w.floor});
    }
    return WarpingFunction::constant(1.0);
}

std::string resolve_output_dir(const RunOptions& options, const RunConfig& config) {
    if (!options.out_dir.empty()) return options.out_dir;
    if (!config.output.empty()) return config.output;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return ".";
}

}  // namespace steklov
