#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wdep {

/// Key-value experiment configuration. Lines are `key = value`; `#` starts a
/// comment; a `[section]` line prefixes the keys below it with `section.`.
class Config {
public:
    struct Entry {
        std::string key;
        std::string value;
        std::size_t line = 0;
    };

    /// Throws std::invalid_argument (with source and line) on malformed lines
    /// or duplicate keys.
    static Config parse(std::string_view text, const std::string& source = "<config>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    const std::string* find(const std::string& key) const;
    /// Replaces or appends.
    void set(const std::string& key, const std::string& value);

    const std::vector<Entry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

    // Typed access; errors name the key.
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    long long integer(const std::string& key) const;
    long long integer_or(const std::string& key, long long fallback) const;
    std::size_t count(const std::string& key) const;  // >= 1
    std::size_t count_or(const std::string& key, std::size_t fallback) const;
    std::optional<std::size_t> optional_count(const std::string& key) const;
    double real(const std::string& key) const;
    double real_or(const std::string& key, double fallback) const;
    std::optional<double> optional_real(const std::string& key) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    std::vector<double> real_list(const std::string& key) const;
    std::vector<std::size_t> count_grid(const std::string& key) const;
    std::vector<std::size_t> count_grid_or(const std::string& key, std::vector<std::size_t> fallback) const;
    std::vector<double> real_grid(const std::string& key) const;
    std::vector<double> real_grid_or(const std::string& key, std::vector<double> fallback) const;
    std::uint64_t seed(const std::string& key) const;

private:
    std::string source_;
    std::vector<Entry> entries_;
};

enum class ValueType { integer, count, real, real_list, count_grid, real_grid, text, boolean, innovation, path, seed };

struct KeySpec {
    std::string key;
    ValueType type = ValueType::text;
    bool required = false;
};

struct ConfigIssue {
    enum class Kind { unknown_key, missing_key, type_error, invalid_value };
    Kind kind = Kind::invalid_value;
    std::string key;
    std::string message;
};

const char* to_string(ConfigIssue::Kind kind);

/// Checks that the value parses as `type`; returns the error text otherwise.
std::optional<std::string> check_value(ValueType type, const std::string& value);

/// Unknown keys (with the closest known key as a suggestion), missing
/// required keys and type errors.
std::vector<ConfigIssue> check_schema(const Config& config, const std::vector<KeySpec>& schema);

/// Closest candidate within edit distance 3, if any.
std::optional<std::string> closest_key(const std::string& key, const std::vector<KeySpec>& schema);

}  // namespace wdep
