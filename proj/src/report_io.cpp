#include "steklov/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace steklov {

BoundReport make_report(std::string name, int k, double lhs, double rhs, bool strict, double tol,
                        std::string note) {
    BoundReport r;
    r.name = std::move(name);
    r.k = k;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.strict = strict;
    r.tol = tol;
    r.pass = strict ? (lhs < rhs + tol) : (lhs <= rhs + tol);
    r.note = std::move(note);
    return r;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    // glibc printf rounds the exact binary value, ties to even.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

// Shortest round-trip of the 12-digit value, so JSON numbers match the CSV digits.
nlohmann::ordered_json rounded(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

}  // namespace

nlohmann::ordered_json to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["k"] = r.k;
    j["lhs"] = rounded(r.lhs);
    j["rhs"] = rounded(r.rhs);
    j["margin"] = rounded(r.margin);
    j["strict"] = r.strict;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["tol"] = rounded(r.tol);
    j["observational"] = r.observational;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

std::string bounds_csv(const std::vector<BoundReport>& reports) {
    CsvTable t({"name", "k", "lhs", "rhs", "margin", "strict", "tol", "verdict", "observational", "note"});
    for (const auto& r : reports)
        t.row()
            .cell(r.name)
            .cell(r.k)
            .cell(r.lhs)
            .cell(r.rhs)
            .cell(r.margin)
            .cell(r.strict)
            .cell(r.tol)
            .cell(std::string(r.pass ? "pass" : "fail"))
            .cell(r.observational)
            .cell(r.note);
    return t.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::cell(double v) {
    rows_.back().push_back(format_number(v));
    return *this;
}

CsvTable& CsvTable::cell(long long v) {
    rows_.back().push_back(std::to_string(v));
    return *this;
}

CsvTable& CsvTable::cell(bool v) {
    rows_.back().push_back(v ? "true" : "false");
    return *this;
}

CsvTable& CsvTable::cell(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) {
        rows_.back().push_back(v);
        return *this;
    }
    std::string quoted = "\"";
    for (char c : v) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    rows_.back().push_back(quoted);
    return *this;
}

std::string CsvTable::str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

}  // namespace steklov
