#include "cda/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cda {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

void RunConfig::set_from_file_entry(const std::string& key,
                                    const std::string& value) {
    values_.emplace(key, value);  // never overrides a flag-set key
}

bool RunConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string RunConfig::get(const std::string& key,
                           const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
        throw DomainError("config: key '" + key + "' is not a number: '" +
                          it->second + "'");
    }
    if (pos != it->second.size())
        throw DomainError("config: trailing junk in numeric key '" + key + "'");
    return v;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(std::llround(v));
    if (v != static_cast<double>(i))
        throw DomainError("config: key '" + key + "' must be an integer");
    return i;
}

std::uint64_t RunConfig::get_seed(const std::string& key,
                                  std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw DomainError("config: key '" + key + "' is not a valid seed");
    }
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line " + std::to_string(lineno) +
                              " of '" + path + "' is not 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw DomainError("config: empty key at line " +
                              std::to_string(lineno));
        set_from_file_entry(key, value);
    }
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
    return os.str();
}

std::uint64_t RunConfig::hash() const {
    // FNV-1a 64-bit over the canonical serialization
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : serialize()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

ResultTable::ResultTable(std::vector<std::string> columns,
                         std::vector<std::string> units)
    : columns_(std::move(columns)), units_(std::move(units)) {
    if (columns_.empty() || columns_.size() != units_.size())
        throw ContractViolation("ResultTable: column/unit lists mismatch");
}

void ResultTable::add_meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
}

void ResultTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw ContractViolation("ResultTable: row width mismatch");
    for (const double v : values)
        if (!std::isfinite(v))
            throw ContractViolation(
                "ResultTable: non-finite value in a good row; use "
                "add_failed_row for failed points");
    rows_.push_back(values);
    status_.push_back(0);
}

void ResultTable::add_failed_row(int error_code,
                                 const std::vector<double>& leading) {
    if (error_code == 0)
        throw ContractViolation("ResultTable: failed row needs nonzero code");
    if (leading.size() > columns_.size())
        throw ContractViolation("ResultTable: failed-row identifiers too wide");
    for (const double v : leading)
        if (!std::isfinite(v))
            throw ContractViolation(
                "ResultTable: non-finite identifier in a failed row");
    std::vector<double> row(columns_.size(), 0.0);
    std::copy(leading.begin(), leading.end(), row.begin());
    rows_.push_back(std::move(row));
    status_.push_back(error_code);
}

double ResultTable::at(std::size_t row, std::size_t col) const {
    return rows_.at(row).at(col);
}

int ResultTable::status(std::size_t row) const { return status_.at(row); }

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void ResultTable::write_csv(std::ostream& os) const {
    for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << "\n";
    os << "# units:";
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << " " << columns_[c] << "[" << units_[c] << "]";
    os << " status[code]\n";
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << columns_[c] << ",";
    os << "status\n";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (const double v : rows_[r]) os << format_g12(v) << ",";
        os << status_[r] << "\n";
    }
}

void ResultTable::write_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DomainError("output: cannot open '" + path + "'");
    write_csv(out);
}

void ResultTable::write_json_sidecar(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DomainError("output: cannot open '" + path + "'");
    auto escape = [](const std::string& s) {
        std::string o;
        for (const char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    };
    out << "{\n  \"metadata\": {\n";
    for (std::size_t i = 0; i < meta_.size(); ++i) {
        out << "    \"" << escape(meta_[i].first) << "\": \""
            << escape(meta_[i].second) << "\"";
        out << (i + 1 < meta_.size() ? ",\n" : "\n");
    }
    out << "  },\n  \"columns\": [";
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        out << "{\"name\": \"" << escape(columns_[c]) << "\", \"unit\": \""
            << escape(units_[c]) << "\"}";
        if (c + 1 < columns_.size()) out << ", ";
    }
    out << "],\n  \"rows\": " << rows_.size() << "\n}\n";
}

}  // namespace cda
