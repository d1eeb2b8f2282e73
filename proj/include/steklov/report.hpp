#pragma once

#include <string>

namespace steklov {

/// One inequality instance lhs (<|<=) rhs evaluated with tolerance `tol`.
struct BoundReport {
    std::string name;
    int k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool strict = false;
    double tol = 0.0;
    bool pass = false;
    /// Observational reports are recorded but never gate a run.
    bool observational = false;
    std::string note;
};

/// Fills margin = rhs - lhs and the verdict: lhs < rhs + tol when strict,
/// lhs <= rhs + tol otherwise.
BoundReport make_report(std::string name, int k, double lhs, double rhs, bool strict, double tol,
                        std::string note = {});

}  // namespace steklov
