#include "featalloc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "featalloc/errors.hpp"

namespace featalloc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

KvConfig KvConfig::parse_string(const std::string& text) {
    KvConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        }
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

bool KvConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KvConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string KvConfig::get_or(const std::string& key,
                             const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: '" + v + "'");
    }
}

}  // namespace

double KvConfig::get_double(const std::string& key) const {
    return parse_double(key, get(key));
}

double KvConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int KvConfig::get_int(const std::string& key) const {
    const double x = get_double(key);
    if (x != std::floor(x)) throw ConfigError("config key " + key + ": not an integer");
    return static_cast<int>(x);
}

int KvConfig::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t KvConfig::get_u64_or(const std::string& key,
                                   std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError("config key " + key + ": not an unsigned integer");
    }
    return out;
}

bool KvConfig::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key " + key + ": expected true/false");
}

void KvConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

std::string KvConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t KvConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (table.header.empty()) {
            table.header = split(line, ',');
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != table.header.size()) {
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected " + std::to_string(table.header.size()) +
                            " fields, got " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": not a number: '" + cell + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw DataError(path + ": missing header row");
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.precision(17);
    for (const auto& c : comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << header[i] << (i + 1 < header.size() ? "," : "");
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i] << (i + 1 < row.size() ? "," : "");
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

void write_pgm(const std::string& path, int width, int height,
               const std::vector<double>& row_major,
               const std::string& sidecar_path) {
    if (static_cast<std::size_t>(width) * height != row_major.size()) {
        throw DataError("write_pgm: size mismatch");
    }
    double lo = 0.0;
    double hi = 0.0;
    for (double v : row_major) hi = std::max(hi, v);
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    for (double v : row_major) {
        const int byte = static_cast<int>(std::lround((v - lo) * scale));
        out.put(static_cast<char>(std::clamp(byte, 0, 255)));
    }
    if (!out) throw DataError("write failed: " + path);
    std::ofstream side(sidecar_path);
    if (!side) throw DataError("cannot open for writing: " + sidecar_path);
    side.precision(17);
    side << "min=" << lo << "\nmax=" << hi << "\nscale=" << scale << '\n';
}

FeatureSample feature_sample_from_observations(const CsvTable& table) {
    if (table.header.size() != 3 || table.header[0] != "obs_id" ||
        table.header[1] != "x" || table.header[2] != "y") {
        throw DataError("observations CSV must have header obs_id,x,y");
    }
    std::map<long long, bool> obs_ids;
    std::map<std::pair<double, double>, int> counts;
    for (const auto& row : table.rows) {
        obs_ids[static_cast<long long>(row[0])] = true;
        counts[{row[1], row[2]}] += 1;
    }
    FeatureSample fs;
    fs.n = static_cast<int>(obs_ids.size());
    fs.features.reserve(counts.size());
    for (const auto& [loc, c] : counts) {
        fs.features.push_back({{loc.first, loc.second}, c});
    }
    return fs;
}

std::vector<Point> points_from_csv(const CsvTable& table) {
    int xi = -1, yi = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == "x") xi = static_cast<int>(i);
        if (table.header[i] == "y") yi = static_cast<int>(i);
    }
    if (xi < 0 || yi < 0) throw DataError("points CSV must have x and y columns");
    std::vector<Point> pts;
    pts.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        pts.push_back({row[static_cast<std::size_t>(xi)],
                       row[static_cast<std::size_t>(yi)]});
    }
    return pts;
}

}  // namespace featalloc
