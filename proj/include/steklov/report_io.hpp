#pragma once

#include "steklov/report.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace steklov {

/// Fixed 12-significant-digit rendering used in every CSV/JSON artifact.
std::string format_number(double v);

/// Writes to a temporary sibling file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::ordered_json to_json(const BoundReport& r);

/// name,k,lhs,rhs,margin,strict,tol,verdict,observational,note
std::string bounds_csv(const std::vector<BoundReport>& reports);

/// Minimal CSV table with a fixed header; numeric cells go through format_number.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row();
    CsvTable& cell(double v);
    CsvTable& cell(long long v);
    CsvTable& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvTable& cell(bool v);
    CsvTable& cell(const std::string& v);

    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace steklov
