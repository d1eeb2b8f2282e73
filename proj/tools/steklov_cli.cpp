// Batch front end: steklov --config run.json [--out DIR] [--workers N] [--mesh N] [--quiet]

#include "steklov/config.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Steklov spectra of warped products: spectra, bounds and extremal families"};
    std::string config_path;
    steklov::RunOptions options;
    int mesh = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", options.out_dir, "output directory (default: config 'output', then $STEKLOV_OUT_DIR)");
    app.add_option("--workers", options.workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--mesh", mesh, "override the mesh element count")->check(CLI::Range(8, 1 << 24));
    app.add_flag("--quiet", options.quiet, "suppress the summary on standard output");
    CLI11_PARSE(app, argc, argv);
    if (mesh > 0) options.mesh = mesh;

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config " << config_path << '\n';
        return steklov::kExitError;
    }
    std::stringstream text;
    text << in.rdbuf();
    const auto v = steklov::validate(text.str());
    if (!v.errors.empty()) {
        std::cerr << "invalid configuration:\n";
        for (const auto& e : v.errors) std::cerr << "  " << e << '\n';
        return steklov::kExitError;
    }
    return steklov::run(*v.config, options, std::cout, std::cerr);
}
