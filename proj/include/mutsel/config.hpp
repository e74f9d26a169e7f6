#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mutsel {

/// Flat `key = value` experiment file. Keys are dotted paths; a `[section]`
/// line prefixes the keys that follow with `section.`. `#` starts a comment.
/// Parsing is strict: malformed lines and duplicate keys are ConfigErrors that
/// name the line.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value);

    /// Line number of a key (0 if set programmatically).
    int line_of(const std::string& key) const;
    /// Throws ConfigError naming every key that was never read.
    void reject_unused() const;

    /// FNV-1a 64-bit hash over the sorted key=value pairs, as 16 hex digits.
    std::string hash() const;

    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
    const std::map<std::string, std::string> entries() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    const Entry& require(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

    std::string origin_;
    std::filesystem::path base_dir_;
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

}  // namespace mutsel
