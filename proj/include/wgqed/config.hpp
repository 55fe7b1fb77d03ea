#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wgqed/model.hpp"

namespace wgqed {

// Invalid or unreadable configuration; `keys` names the offending entries.
struct ConfigError : Error {
    ConfigError(const std::string& what, std::vector<std::string> keys = {}) : Error(what), keys(std::move(keys)) {}
    std::vector<std::string> keys;
};

// Flat dotted-key store. Text form: one "section.key = value" per line,
// '#' comments, optional "[section]" headers that prefix following keys.
// JSON objects are flattened to the same dotted keys.
class Config {
public:
    static Config parse_text(const std::string& text);
    static Config parse_json(const std::string& text);
    // Chooses JSON when the first non-blank character is '{'.
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

    // Throws ConfigError listing every key outside `known`.
    void require_known(const std::set<std::string>& known) const;

    // Sorted "key=value" lines; the input of config_hash.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

// "a,b,c" lists, "lo..hi" (integer steps, or `points` samples when either
// end is fractional) and "lo..hi:count" linear ranges.
std::vector<double> parse_values(const std::string& text, int points = 51);
std::vector<int> parse_int_values(const std::string& text);

}  // namespace wgqed
