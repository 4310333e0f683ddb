#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ivnow {

// Calendar date stored as days since 1970-01-01. Cheap to copy and compare;
// conversions go through std::chrono's civil-calendar types.
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}

    static Date from_ymd(int year, unsigned month, unsigned day);
    // Parses strict ISO "YYYY-MM-DD".
    static std::optional<Date> try_parse(std::string_view iso);
    static Date parse(std::string_view iso);  // throws Err::parse_error

    std::int32_t serial() const { return serial_; }
    std::string to_string() const;

    // 0 = Sunday ... 6 = Saturday.
    int weekday() const {
        int w = static_cast<int>((serial_ + 4) % 7);
        return w < 0 ? w + 7 : w;
    }
    bool is_weekend() const {
        int w = weekday();
        return w == 0 || w == 6;
    }

    Date operator+(int days) const { return Date(serial_ + days); }
    Date operator-(int days) const { return Date(serial_ - days); }
    int operator-(Date other) const { return serial_ - other.serial_; }
    auto operator<=>(const Date&) const = default;

private:
    std::int32_t serial_ = 0;
};

// Wall-clock instant as a date plus seconds into that day [0, 86400).
struct Timestamp {
    Date date;
    std::int32_t seconds = 0;

    // "YYYY-MM-DD HH:MM[:SS]" or "YYYY-MM-DDTHH:MM[:SS]", optional trailing Z.
    static std::optional<Timestamp> try_parse(std::string_view text);
    static Timestamp parse(std::string_view text);

    std::string to_string() const;

    auto operator<=>(const Timestamp&) const = default;
};

}  // namespace ivnow
