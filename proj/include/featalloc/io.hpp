#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "featalloc/simulate.hpp"

namespace featalloc {

/// Flat key-value configuration with [section] headers; section keys are
/// stored as "section.key". '#' starts a comment.
class KvConfig {
  public:
    static KvConfig parse_file(const std::string& path);
    static KvConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int_or(const std::string& key, int fallback) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);

    /// Sorted key=value text, used for hashing.
    std::string canonical() const;
    /// FNV-1a over the canonical form.
    std::uint64_t hash() const;

  private:
    std::map<std::string, std::string> values_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with a mandatory header row. Parse failures report
/// the 1-based line number.
CsvTable read_csv(const std::string& path);

/// Writes comment lines (prefixed '#'), a header row, and numeric rows.
void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// 8-bit binary PGM (P5, maxval 255), values scaled linearly to [0,255];
/// the scale is recorded in a sidecar text file.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<double>& row_major,
               const std::string& sidecar_path);

/// Groups an observations table (obs_id, x, y) into a feature sample;
/// features are identified by exact coordinate equality.
FeatureSample feature_sample_from_observations(const CsvTable& table);

/// Loads bare (x, y) points.
std::vector<Point> points_from_csv(const CsvTable& table);

}  // namespace featalloc
