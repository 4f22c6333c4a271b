#pragma once
// Run configuration and tabular output plumbing shared by the CLI commands:
// flat key-value config files, flag/file precedence, FNV config hashing,
// CSV emission with a commented metadata header, and a JSON sidecar.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cda/errors.hpp"

namespace cda {

// Flat, fully serializable run configuration.  Values set from CLI flags
// override values read from a config file (set_from_file never clobbers a
// flag-set key).
class RunConfig {
  public:
    void set(const std::string& key, const std::string& value);
    void set_from_file_entry(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;

    // "key = value" lines; '#' comments and blank lines ignored.
    void load_file(const std::string& path);

    // Canonical serialization (sorted key order) and its FNV-1a hash.
    std::string serialize() const;
    std::uint64_t hash() const;

    const std::map<std::string, std::string>& entries() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

// Column-labeled numeric table with run metadata.  Every table carries a
// trailing integer "status" column: 0 for good rows, a nonzero error code for
// flagged (failed) rows, whose numeric cells are zeroed except for optional
// leading identifier columns (coordinates of the failed point).  NaN in a good
// row is a contract violation.
class ResultTable {
  public:
    ResultTable(std::vector<std::string> columns, std::vector<std::string> units);

    void add_meta(const std::string& key, const std::string& value);
    void add_row(const std::vector<double>& values);
    void add_failed_row(int error_code, const std::vector<double>& leading = {});

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return columns_.size(); }
    double at(std::size_t row, std::size_t col) const;
    int status(std::size_t row) const;

    // CSV with "# key: value" metadata lines, then a header row, then data
    // rows formatted with %.12g for byte-identical reruns.
    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;
    // Sidecar JSON holding the same metadata plus the column schema.
    void write_json_sidecar(const std::string& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::string> units_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<double>> rows_;
    std::vector<int> status_;
};

// %.12g formatting used for all numeric table output.
std::string format_g12(double v);

}  // namespace cda
