#include "doctest.h"

#include "steklov/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

using namespace steklov;
namespace fs = std::filesystem;

namespace {

bool has_error(const Validation& v, const std::string& needle) {
    return std::any_of(v.errors.begin(), v.errors.end(),
                       [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("steklov_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunOptions quiet_in(const fs::path& dir) {
    RunOptions o;
    o.out_dir = dir.string();
    o.quiet = true;
    return o;
}

const char* kSpectrum = R"({"command": "spectrum", "base": {"kind": "interval", "L": 1},
    "fiber": {"kind": "sphere", "n": 2}, "K": 4, "mesh_N": 2048})";

}  // namespace

TEST_CASE("minimal configurations validate") {
    const auto v = validate(kSpectrum);
    REQUIRE(v.errors.empty());
    REQUIRE(v.config);
    CHECK(v.config->command == Command::spectrum);
    CHECK(v.config->K == 4);
    CHECK(v.config->mesh_N == 2048);
    CHECK(v.config->base->is_interval());
    CHECK(v.config->fiber->dim() == 2);
    CHECK(!v.config->warping);
    CHECK(build_warping(*v.config)(0.5) == 1.0);

    const auto b = parse_config(R"({"command": "bounds", "base": {"kind": "ball", "d": 2, "R": 1},
        "fiber": {"kind": "circle", "radius": 2}, "k": 3,
        "warping": {"kind": "hdelta", "C": 3, "delta": 0.2}})");
    CHECK(b.checks == std::vector<std::string>{"basic", "kcompk0"});
    CHECK(build_warping(b)(0.0) == 3.0);
}

TEST_CASE("validation errors are addressed by field") {
    auto v = validate(R"({"command": "spectrum", "base": {"kind": "interval", "L": 1}, "fiber": {"kind": "sphere"}})");
    CHECK(!v.config);
    CHECK(has_error(v, "fiber.n: missing"));

    v = validate(R"({"command": "bounds", "base": {"kind": "interval", "L": 1}, "fiber": {"kind": "sphere", "n": 2},
        "k": 1, "p": 2, "checks": ["lp"]})");
    CHECK(has_error(v, "'lp' requires n >= 3"));

    v = validate(R"({"command": "spectrum", "base": {"kind": "interval", "L": 1, "width": 2},
        "fiber": {"kind": "sphere", "n": 2}, "colour": "red"})");
    CHECK(has_error(v, "base.width: unknown key"));
    CHECK(has_error(v, "colour: unknown key"));

    v = validate(R"({"command": "blowup", "base": {"kind": "ball", "d": 2, "R": 1},
        "fiber": {"kind": "sphere", "n": 4}, "p": 0.5, "budget": 20})");
    CHECK(has_error(v, "p: must be >= 1"));

    v = validate(R"({"command": "saturate", "base": {"kind": "interval", "L": 1},
        "fiber": {"kind": "sphere", "n": 3}, "C_list": [2], "delta_list": [0.1]})");
    CHECK(has_error(v, "saturate requires n = 2"));

    v = validate("{not json");
    CHECK(has_error(v, "invalid JSON"));

    CHECK_THROWS_AS(parse_config(R"({"command": "dance"})"), ConfigError);
    try {
        parse_config(R"({"command": "spectrum"})");
    } catch (const ConfigError& e) {
        CHECK(e.errors().size() >= 2);
    }
}

TEST_CASE("spectrum run writes its table") {
    TempDir dir("spectrum");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run(parse_config(kSpectrum), quiet_in(dir.path), out, err) == kExitOk);
    const std::string csv = slurp(dir.path / "spectrum.csv");
    CHECK(csv.rfind("k,sigma,j,l,lambda_j,multiplicity\n0,0,0,0,0,1\n1,0.86105", 0) == 0);
    CHECK(err.str().empty());
}

TEST_CASE("bounds at k = 0 pass and outputs are byte-identical across runs") {
    const auto cfg = parse_config(R"({"command": "bounds", "base": {"kind": "interval", "L": 1},
        "fiber": {"kind": "sphere", "n": 2}, "k": 0, "mesh_N": 256,
        "warping": {"kind": "samples", "points": [[0, 1], [0.5, 2.5], [1, 1]]}})");
    TempDir a("bounds_a");
    TempDir b("bounds_b");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run(cfg, quiet_in(a.path), out, err) == kExitOk);
    RunOptions opts = quiet_in(b.path);
    opts.workers = 4;
    CHECK(run(cfg, opts, out, err) == kExitOk);
    for (const char* name : {"bounds.json", "bounds.csv"}) {
        const std::string x = slurp(a.path / name);
        CHECK(!x.empty());
        CHECK(x == slurp(b.path / name));
    }
    CHECK(slurp(a.path / "bounds.json").find("\"status\"") != std::string::npos);
}

TEST_CASE("run errors map to the error exit status") {
    TempDir dir("error");
    const auto cfg = parse_config(R"({"command": "bounds", "base": {"kind": "interval", "L": 1},
        "fiber": {"kind": "sphere", "n": 2}, "k": 1,
        "warping": {"kind": "hdelta", "C": 2, "delta": 0.9}})");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run(cfg, quiet_in(dir.path), out, err) == kExitError);
    CHECK(err.str().rfind("error: ", 0) == 0);
}

TEST_CASE("output directory precedence") {
    auto cfg = parse_config(kSpectrum);
    RunOptions o;
    ::unsetenv(kOutDirEnv);
    CHECK(resolve_output_dir(o, cfg) == ".");
    ::setenv(kOutDirEnv, "/tmp/from_env", 1);
    CHECK(resolve_output_dir(o, cfg) == "/tmp/from_env");
    cfg.output = "/tmp/from_config";
    CHECK(resolve_output_dir(o, cfg) == "/tmp/from_config");
    o.out_dir = "/tmp/from_flag";
    CHECK(resolve_output_dir(o, cfg) == "/tmp/from_flag");
    ::unsetenv(kOutDirEnv);
}

TEST_CASE("command-line executable") {
    TempDir dir("exe");
    const fs::path good = dir.path / "good.json";
    const fs::path bad = dir.path / "bad.json";
    std::ofstream(good) << kSpectrum;
    std::ofstream(bad) << R"({"command": "spectrum", "base": {"kind": "interval", "L": 1}, "fiber": {"kind": "sphere"}})";
    auto status = [&](const fs::path& cfg) {
        const std::string cmd = std::string(STEKLOV_CLI_PATH) + " --quiet --config " + cfg.string() + " --out " +
                                dir.path.string() + " > /dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status(good) == kExitOk);
    CHECK(fs::exists(dir.path / "spectrum.csv"));
    CHECK(status(bad) == kExitError);
    CHECK(status(dir.path / "missing.json") == kExitError);
}
