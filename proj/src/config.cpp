#include "wgqed/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wgqed {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

void flatten(const nlohmann::json& j, const std::string& prefix, Config& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (prefix.empty()) throw ConfigError("JSON config must be an object");
    if (j.is_array()) {
        std::string joined;
        for (const auto& e : j) {
            if (!joined.empty()) joined += ",";
            joined += e.is_string() ? e.get<std::string>() : e.dump();
        }
        out.set(prefix, joined);
    } else if (j.is_string()) {
        out.set(prefix, j.get<std::string>());
    } else {
        out.set(prefix, j.dump());
    }
}

}  // namespace

Config Config::parse_text(const std::string& text) {
    Config c;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value", {line});
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        c.set(key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    Config c;
    flatten(j, "", c);
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'", {path});
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json(text);
    return parse_text(text);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    auto v = to_double(it->second);
    if (!v) throw ConfigError("key '" + key + "' expects a number, got '" + it->second + "'", {key});
    return *v;
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    auto v = to_double(it->second);
    if (!v || *v != std::floor(*v) || std::abs(*v) > 2e9)
        throw ConfigError("key '" + key + "' expects an integer, got '" + it->second + "'", {key});
    return static_cast<int>(*v);
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return parse_values(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what(), {key});
    }
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return parse_int_values(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what(), {key});
    }
}

void Config::require_known(const std::set<std::string>& known) const {
    std::vector<std::string> bad;
    for (const auto& [k, v] : values_)
        if (!known.count(k)) bad.push_back(k);
    if (bad.empty()) return;
    std::string msg = "unknown config keys:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<double> parse_values(const std::string& text, int points) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        if (item.empty()) continue;
        const auto dots = item.find("..", 1);
        if (dots == std::string::npos) {
            auto v = to_double(item);
            if (!v) throw ConfigError("not a number: '" + item + "'");
            out.push_back(*v);
            continue;
        }
        std::string rhs = item.substr(dots + 2);
        int count = 0;
        if (const auto colon = rhs.find(':'); colon != std::string::npos) {
            auto c = to_double(rhs.substr(colon + 1));
            if (!c || *c < 1 || *c != std::floor(*c)) throw ConfigError("bad sample count in '" + item + "'");
            count = static_cast<int>(*c);
            rhs.erase(colon);
        }
        auto lo = to_double(item.substr(0, dots));
        auto hi = to_double(rhs);
        if (!lo || !hi) throw ConfigError("bad range '" + item + "'");
        const bool integral = *lo == std::floor(*lo) && *hi == std::floor(*hi);
        if (count == 0 && integral) {
            const double step = *hi >= *lo ? 1.0 : -1.0;
            for (double x = *lo; step > 0 ? x <= *hi : x >= *hi; x += step) out.push_back(x);
            continue;
        }
        if (count == 0) count = points;
        if (count == 1) {
            out.push_back(*lo);
            continue;
        }
        for (int i = 0; i < count; ++i) out.push_back(*lo + (*hi - *lo) * i / (count - 1));
    }
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

std::vector<int> parse_int_values(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_values(text)) {
        if (v != std::floor(v)) throw ConfigError("expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace wgqed
