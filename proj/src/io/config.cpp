#include "ivnow/io/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ivnow/core/csv.hpp"
#include "ivnow/core/error.hpp"

namespace ivnow::io {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

FlatConfig FlatConfig::from_string(const std::string& text,
                                   const std::string& origin) {
    FlatConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::string trimmed = trim(line);
        if (trimmed.empty())
            continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            raise(Err::config_error, origin + ":" + std::to_string(line_no) +
                                         ": expected 'key = value'");
        std::string key = trim(trimmed.substr(0, eq));
        std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty())
            raise(Err::config_error,
                  origin + ":" + std::to_string(line_no) + ": empty key");
        if (!cfg.values_.emplace(key, value).second)
            raise(Err::config_error, origin + ":" + std::to_string(line_no) +
                                         ": duplicate key '" + key + "'");
    }
    return cfg;
}

FlatConfig FlatConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(Err::config_error, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

bool FlatConfig::has(const std::string& key) const {
    return values_.count(key) > 0;
}

std::optional<std::string> FlatConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::string FlatConfig::require_string(const std::string& key) const {
    auto v = get(key);
    if (!v || v->empty())
        raise(Err::config_error,
              origin_ + ": missing required key '" + key + "'");
    return *v;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    return parse_double(*v, origin_ + ": key '" + key + "'");
}

long FlatConfig::get_long(const std::string& key, long fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    return parse_long(*v, origin_ + ": key '" + key + "'");
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    if (*v == "true" || *v == "1" || *v == "yes")
        return true;
    if (*v == "false" || *v == "0" || *v == "no")
        return false;
    raise(Err::config_error,
          origin_ + ": key '" + key + "' must be true/false, got '" + *v + "'");
}

std::vector<int> FlatConfig::get_int_list(
    const std::string& key, const std::vector<int>& fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    std::vector<int> out;
    for (auto field : split_fields(*v))
        out.push_back(static_cast<int>(
            parse_long(field, origin_ + ": key '" + key + "'")));
    return out;
}

std::vector<double> FlatConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
    auto v = get(key);
    if (!v)
        return fallback;
    std::vector<double> out;
    for (auto field : split_fields(*v))
        out.push_back(parse_double(field, origin_ + ": key '" + key + "'"));
    return out;
}

std::vector<std::string> FlatConfig::unknown_keys(
    const std::vector<std::string>& known) const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_)
        if (std::find(known.begin(), known.end(), key) == known.end())
            out.push_back(key);
    return out;
}

}  // namespace ivnow::io
