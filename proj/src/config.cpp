#include "mutsel/config.hpp"

#include "mutsel/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mutsel {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line);
        if (content.front() == '[') {
            if (content.back() != ']') throw Error(ErrorCode::ConfigError, where + ": unterminated section header");
            section = trim(content.substr(1, content.size() - 2));
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, where + ": expected 'key = value'");
        std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) throw Error(ErrorCode::ConfigError, where + ": empty key");
        if (value.empty()) throw Error(ErrorCode::ConfigError, where + ": empty value for '" + key + "'");
        if (!section.empty()) key = section + "." + key;
        if (cfg.entries_.count(key))
            throw Error(ErrorCode::ConfigError, where + ": duplicate key '" + key + "' (first set on line " +
                                                    std::to_string(cfg.entries_[key].line) + ")");
        cfg.entries_[key] = {value, line};
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    Config cfg = parse(ss.str(), path.string());
    cfg.base_dir_ = path.parent_path();
    return cfg;
}

bool Config::has(const std::string& key) const {
    if (entries_.count(key) == 0) return false;
    used_.insert(key);
    return true;
}

void Config::fail(const std::string& key, const std::string& msg) const {
    throw Error(ErrorCode::ConfigError, origin_ + ":" + std::to_string(line_of(key)) + ": '" + key + "' " + msg);
}

const Config::Entry& Config::require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw Error(ErrorCode::ConfigError, origin_ + ": missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    auto v = to_double(require(key).value);
    if (!v) fail(key, "must be a number");
    return *v;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
    const std::string& s = require(key).value;
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "must be an integer");
    return v;
}

long Config::get_int(const std::string& key, long fallback) const { return has(key) ? get_int(key) : fallback; }

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = require(key).value;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(key, "must be true or false");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(require(key).value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto v = to_double(trim(item));
        if (!v) fail(key, "must be a comma-separated list of numbers");
        out.push_back(*v);
    }
    if (out.empty()) fail(key, "must not be empty");
    return out;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
    return has(key) ? get_doubles(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }

int Config::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

void Config::reject_unused() const {
    std::string unknown;
    for (const auto& [key, entry] : entries_) {
        if (used_.count(key)) continue;
        if (!unknown.empty()) unknown += ", ";
        unknown += "'" + key + "' (line " + std::to_string(entry.line) + ")";
    }
    if (!unknown.empty()) throw Error(ErrorCode::ConfigError, origin_ + ": unknown keys " + unknown);
}

std::string Config::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (const auto& [key, entry] : entries_) {
        for (char c : key + "=" + entry.value + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::map<std::string, std::string> Config::entries() const {
    std::map<std::string, std::string> out;
    for (const auto& [key, entry] : entries_) out[key] = entry.value;
    return out;
}

}  // namespace mutsel
