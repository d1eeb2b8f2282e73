#pragma once

#include "steklov/geometry.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steklov {

enum class Command { spectrum, bounds, asymptotics, saturate, blowup, stability, conformal };

std::string to_string(Command c);

struct WarpingSpec {
    enum class Kind { constant, samples, file, hdelta, heps };
    Kind kind = Kind::constant;
    double C = 1.0;
    std::vector<std::pair<double, double>> points;
    std::string path;
    double delta = 0.0;
    double p = 1.0;
    double budget = 0.0;
    double eps = 0.0;
    double floor = 1.0;
};

struct RunConfig {
    Command command = Command::spectrum;
    std::optional<BaseDomain> base;
    std::optional<FiberSpectrum> fiber;
    std::optional<WarpingSpec> warping;
    int k = 1;
    int K = 10;
    std::optional<double> p;
    std::optional<double> C;
    std::vector<double> C_list;
    std::vector<double> delta_list;
    std::vector<double> eps_list;
    std::optional<double> budget;
    double floor = 1.0;
    std::optional<double> q;
    std::optional<double> r;
    std::vector<std::string> checks;
    int mesh_N = kDefaultMeshElements;
    double tol = 1e-8;
    std::string output;
};

/// Aggregated, field-addressed validation failures ("fiber.n: missing").
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

struct Validation {
    std::optional<RunConfig> config;
    std::vector<std::string> errors;
};

/// Structural and range validation of a JSON run configuration.
/// Unknown keys are errors.
Validation validate(const std::string& text);

/// validate() that throws ConfigError on any error.
RunConfig parse_config(const std::string& text);

/// Builds the warping function named by the config (h = 1 when absent).
WarpingFunction build_warping(const RunConfig& config);

struct RunOptions {
    /// Empty: config "output", then $STEKLOV_OUT_DIR, then ".".
    std::string out_dir;
    int workers = 1;
    std::optional<int> mesh;
    bool quiet = false;
};

inline constexpr const char* kOutDirEnv = "STEKLOV_OUT_DIR";

std::string resolve_output_dir(const RunOptions& options, const RunConfig& config);

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitError = 2;

/// Executes one command, writes its artifacts and prints a summary to `out`.
/// Errors are reported on `err` and mapped to kExitError.
int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace steklov
