#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ivnow::io {

// Flat `key = value` configuration file. `#` starts a comment, blank lines
// are skipped, duplicate keys are an error. All run parameters live in files
// of this shape so runs stay human-diffable.
class FlatConfig {
public:
    static FlatConfig from_file(const std::string& path);
    static FlatConfig from_string(const std::string& text,
                                  const std::string& origin = "<config>");

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<int> get_int_list(const std::string& key,
                                  const std::vector<int>& fallback) const;
    std::vector<double> get_double_list(
        const std::string& key, const std::vector<double>& fallback) const;

    // Keys present in the file but not in `known`; used to reject typos.
    std::vector<std::string> unknown_keys(
        const std::vector<std::string>& known) const;

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::string> values_;
};

}  // namespace ivnow::io
