#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nwinterp {

// Flat "key = value" config file with '#' comments. Unknown keys are
// rejected by the consumers, not the parser.
class RunConfig {
public:
    static RunConfig parse(std::istream& in, const std::string& source = "<config>");
    static RunConfig parse_file(const std::string& path);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;             // throws ConfigError
    std::string get_or(const std::string& key, std::string fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;  // comma separated
    std::vector<long long> get_int_list(const std::string& key) const;

    // Throws ConfigError if any present key is not in the allowed set.
    // Entries ending in '*' match prefixes (e.g. "scenario.param.*").
    void require_known_keys(const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::string source_;
};

}  // namespace nwinterp
