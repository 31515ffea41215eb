#include "nwinterp/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nwinterp/errors.hpp"

namespace nwinterp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double_str(const std::string& s, const std::string& where) {
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ConfigError(where + ": not a number: '" + s + "'");
    }
    return v;
}

long long parse_int_str(const std::string& s, const std::string& where) {
    long long v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ConfigError(where + ": not an integer: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in, const std::string& source) {
    RunConfig cfg;
    cfg.source_ = source;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        }
        if (cfg.entries_.count(key)) {
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        }
        cfg.entries_[key] = value;
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in, path);
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

const std::string& RunConfig::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(source_ + ": missing required key '" + key + "'");
    }
    return it->second;
}

std::string RunConfig::get_or(const std::string& key, std::string fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? std::move(fallback) : it->second;
}

double RunConfig::get_double(const std::string& key) const {
    return parse_double_str(get(key), source_ + ": key '" + key + "'");
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long RunConfig::get_int(const std::string& key) const {
    return parse_int_str(get(key), source_ + ": key '" + key + "'");
}

long long RunConfig::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_commas(get(key))) {
        out.push_back(parse_double_str(item, source_ + ": key '" + key + "'"));
    }
    return out;
}

std::vector<long long> RunConfig::get_int_list(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& item : split_commas(get(key))) {
        out.push_back(parse_int_str(item, source_ + ": key '" + key + "'"));
    }
    return out;
}

void RunConfig::require_known_keys(const std::vector<std::string>& allowed) const {
    for (const auto& [key, _] : entries_) {
        bool ok = false;
        for (const auto& pattern : allowed) {
            if (!pattern.empty() && pattern.back() == '*') {
                if (key.rfind(pattern.substr(0, pattern.size() - 1), 0) == 0) {
                    ok = true;
                    break;
                }
            } else if (key == pattern) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError(source_ + ": unknown key '" + key + "'");
    }
}

}  // namespace nwinterp
