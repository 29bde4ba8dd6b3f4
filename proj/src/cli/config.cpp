#include "wdep/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wdep/innovation.hpp"
#include "wdep/text.hpp"

namespace wdep {

namespace {

std::invalid_argument key_error(const std::string& key, const std::string& what) {
    return std::invalid_argument("config key '" + key + "': " + what);
}

bool valid_key(const std::string& key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') return false;
    return std::all_of(key.begin(), key.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    });
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    // optimal string alignment: insertions, deletions, substitutions, adjacent swaps
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
        }
    }
    return d[a.size()][b.size()];
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto where = source + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument(where + ": unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!section.empty() && !valid_key(section)) throw std::invalid_argument(where + ": bad section name '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(where + ": expected 'key = value'");
        std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        if (!valid_key(key)) throw std::invalid_argument(where + ": bad key '" + key + "'");
        if (cfg.has(key)) throw std::invalid_argument(where + ": duplicate key '" + key + "'");
        cfg.entries_.push_back({key, value, line_no});
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

const std::string* Config::find(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return &e.value;
    return nullptr;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

void Config::set(const std::string& key, const std::string& value) {
    for (auto& e : entries_) {
        if (e.key == key) {
            e.value = value;
            return;
        }
    }
    entries_.push_back({key, value, 0});
}

std::string Config::text(const std::string& key) const {
    const auto* v = find(key);
    if (!v) throw key_error(key, "required key is missing");
    return *v;
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    const auto* v = find(key);
    return v ? *v : fallback;
}

long long Config::integer(const std::string& key) const {
    try {
        return parse_integer(text(key));
    } catch (const std::invalid_argument& e) {
        if (!has(key)) throw;
        throw key_error(key, e.what());
    }
}

long long Config::integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::size_t Config::count(const std::string& key) const {
    const long long v = integer(key);
    if (v < 1) throw key_error(key, "must be a positive integer");
    return static_cast<std::size_t>(v);
}

std::size_t Config::count_or(const std::string& key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
}

std::optional<std::size_t> Config::optional_count(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const long long v = integer(key);
    if (v < 0) throw key_error(key, "must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

double Config::real(const std::string& key) const {
    try {
        return parse_real(text(key));
    } catch (const std::invalid_argument& e) {
        if (!has(key)) throw;
        throw key_error(key, e.what());
    }
}

double Config::real_or(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

std::optional<double> Config::optional_real(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return real(key);
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw key_error(key, "expected true or false, got '" + v + "'");
}

std::vector<double> Config::real_list(const std::string& key) const {
    try {
        return parse_real_list(text(key));
    } catch (const std::invalid_argument& e) {
        if (!has(key)) throw;
        throw key_error(key, e.what());
    }
}

std::vector<std::size_t> Config::count_grid(const std::string& key) const {
    std::vector<long long> raw;
    try {
        raw = parse_integer_grid(text(key));
    } catch (const std::invalid_argument& e) {
        if (!has(key)) throw;
        throw key_error(key, e.what());
    }
    std::vector<std::size_t> out;
    for (long long v : raw) {
        if (v < 0) throw key_error(key, "grid values must be nonnegative");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw key_error(key, "empty grid");
    return out;
}

std::vector<std::size_t> Config::count_grid_or(const std::string& key, std::vector<std::size_t> fallback) const {
    return has(key) ? count_grid(key) : fallback;
}

std::vector<double> Config::real_grid(const std::string& key) const {
    try {
        auto out = parse_real_grid(text(key));
        if (out.empty()) throw std::invalid_argument("empty grid");
        return out;
    } catch (const std::invalid_argument& e) {
        if (!has(key)) throw;
        throw key_error(key, e.what());
    }
}

std::vector<double> Config::real_grid_or(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? real_grid(key) : fallback;
}

std::uint64_t Config::seed(const std::string& key) const {
    const long long v = integer(key);
    if (v < 0) throw key_error(key, "seed must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

const char* to_string(ConfigIssue::Kind kind) {
    switch (kind) {
        case ConfigIssue::Kind::unknown_key: return "unknown_key";
        case ConfigIssue::Kind::missing_key: return "missing_key";
        case ConfigIssue::Kind::type_error: return "type_error";
        case ConfigIssue::Kind::invalid_value: return "invalid_value";
    }
    return "?";
}

std::optional<std::string> check_value(ValueType type, const std::string& value) {
    try {
        switch (type) {
            case ValueType::integer: parse_integer(value); break;
            case ValueType::count:
                if (parse_integer(value) < 1) return "expected a positive integer, got '" + value + "'";
                break;
            case ValueType::seed:
                if (parse_integer(value) < 0) return "expected a nonnegative integer, got '" + value + "'";
                break;
            case ValueType::real: parse_real(value); break;
            case ValueType::real_list: parse_real_list(value); break;
            case ValueType::count_grid:
                for (long long v : parse_integer_grid(value))
                    if (v < 0) return "grid values must be nonnegative";
                break;
            case ValueType::real_grid:
                if (parse_real_grid(value).empty()) return "empty grid";
                break;
            case ValueType::boolean:
                if (value != "true" && value != "false" && value != "1" && value != "0" && value != "yes" && value != "no")
                    return "expected true or false, got '" + value + "'";
                break;
            case ValueType::innovation: parse_innovation(value); break;
            case ValueType::path:
                if (value.empty()) return "empty path";
                if (!std::filesystem::exists(value)) return "file does not exist: '" + value + "'";
                break;
            case ValueType::text:
                if (value.empty()) return "empty value";
                break;
        }
    } catch (const std::exception& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

std::optional<std::string> closest_key(const std::string& key, const std::vector<KeySpec>& schema) {
    std::optional<std::string> best;
    std::size_t best_d = 4;
    for (const auto& spec : schema) {
        const std::size_t d = edit_distance(key, spec.key);
        if (d < best_d) {
            best_d = d;
            best = spec.key;
        }
    }
    return best;
}

std::vector<ConfigIssue> check_schema(const Config& config, const std::vector<KeySpec>& schema) {
    std::vector<ConfigIssue> issues;
    for (const auto& e : config.entries()) {
        const auto it = std::find_if(schema.begin(), schema.end(), [&](const KeySpec& s) { return s.key == e.key; });
        if (it == schema.end()) {
            std::string msg = "unknown key";
            if (const auto s = closest_key(e.key, schema)) msg += " (did you mean '" + *s + "'?)";
            issues.push_back({ConfigIssue::Kind::unknown_key, e.key, msg});
            continue;
        }
        if (const auto err = check_value(it->type, e.value)) issues.push_back({ConfigIssue::Kind::type_error, e.key, *err});
    }
    for (const auto& spec : schema) {
        if (spec.required && !config.has(spec.key))
            issues.push_back({ConfigIssue::Kind::missing_key, spec.key, "required key is missing"});
    }
    return issues;
}

}  // namespace wdep
