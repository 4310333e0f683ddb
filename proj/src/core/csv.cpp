#include "ivnow/core/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "ivnow/core/error.hpp"

namespace ivnow {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

double parse_double(std::string_view field, const std::string& context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        raise(Err::parse_error,
              context + ": expected a number, got '" + std::string(field) + "'");
    return v;
}

long parse_long(std::string_view field, const std::string& context) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        raise(Err::parse_error,
              context + ": expected an integer, got '" + std::string(field) + "'");
    return v;
}

int CsvFile::column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int CsvFile::require_column(std::string_view name) const {
    int idx = column(name);
    if (idx < 0)
        raise(Err::parse_error,
              path + ": missing required column '" + std::string(name) + "'");
    return idx;
}

CsvFile read_csv(const std::string& path, char sep) {
    std::ifstream in(path);
    if (!in)
        raise(Err::parse_error, "cannot open '" + path + "'");
    CsvFile csv;
    csv.path = path;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty())
            continue;
        auto fields = split_fields(view, sep);
        std::vector<std::string> owned;
        owned.reserve(fields.size());
        for (auto f : fields)
            owned.emplace_back(f);
        if (csv.header.empty()) {
            csv.header = std::move(owned);
        } else {
            if (owned.size() != csv.header.size())
                raise(Err::parse_error,
                      path + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(csv.header.size()) + " fields, got " +
                          std::to_string(owned.size()));
            csv.rows.emplace_back(line_no, std::move(owned));
        }
    }
    if (csv.header.empty())
        raise(Err::parse_error, path + ": empty file (missing header)");
    return csv;
}

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace ivnow
