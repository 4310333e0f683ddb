#include "ivnow/core/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "ivnow/core/error.hpp"

namespace ivnow {

namespace {

bool parse_int(std::string_view s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year(year), std::chrono::month(month),
                       std::chrono::day(day)};
    if (!ymd.ok())
        raise(Err::parse_error, "invalid calendar date");
    return Date(static_cast<std::int32_t>(
        sys_days(ymd).time_since_epoch().count()));
}

std::optional<Date> Date::try_parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_int(iso.substr(0, 4), y) || !parse_int(iso.substr(5, 2), m) ||
        !parse_int(iso.substr(8, 2), d))
        return std::nullopt;
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year(y), std::chrono::month(unsigned(m)),
                       std::chrono::day(unsigned(d))};
    if (!ymd.ok())
        return std::nullopt;
    return Date(static_cast<std::int32_t>(
        sys_days(ymd).time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
    auto d = try_parse(iso);
    if (!d)
        raise(Err::parse_error,
              "expected ISO date YYYY-MM-DD, got '" + std::string(iso) + "'");
    return *d;
}

std::string Date::to_string() const {
    using namespace std::chrono;
    year_month_day ymd{sys_days(days(serial_))};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

std::optional<Timestamp> Timestamp::try_parse(std::string_view text) {
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z'))
        text.remove_suffix(1);
    if (text.size() < 16)
        return std::nullopt;
    auto date = Date::try_parse(text.substr(0, 10));
    if (!date)
        return std::nullopt;
    char sep = text[10];
    if (sep != 'T' && sep != ' ')
        return std::nullopt;
    std::string_view clock = text.substr(11);
    int h = 0, m = 0, s = 0;
    if (clock.size() == 5) {
        if (clock[2] != ':' || !parse_int(clock.substr(0, 2), h) ||
            !parse_int(clock.substr(3, 2), m))
            return std::nullopt;
    } else if (clock.size() == 8) {
        if (clock[2] != ':' || clock[5] != ':' ||
            !parse_int(clock.substr(0, 2), h) ||
            !parse_int(clock.substr(3, 2), m) ||
            !parse_int(clock.substr(6, 2), s))
            return std::nullopt;
    } else {
        return std::nullopt;
    }
    if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 59)
        return std::nullopt;
    return Timestamp{*date, h * 3600 + m * 60 + s};
}

Timestamp Timestamp::parse(std::string_view text) {
    auto ts = try_parse(text);
    if (!ts)
        raise(Err::parse_error,
              "expected timestamp YYYY-MM-DDTHH:MM[:SS], got '" +
                  std::string(text) + "'");
    return *ts;
}

std::string Timestamp::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%sT%02d:%02d:%02d",
                  date.to_string().c_str(), seconds / 3600,
                  (seconds / 60) % 60, seconds % 60);
    return buf;
}

}  // namespace ivnow
