#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace surgecast {

// Day-precision calendar date. Internally a serial day count (days since
// 1970-01-01), so ordering and day arithmetic are plain integer operations.
class Date {
public:
    Date() = default;
    explicit Date(int serial) : serial_(serial) {}

    static Date from_ymd(int year, int month, int day);

    // Strict ISO 8601 (YYYY-MM-DD). Rejects impossible calendar dates.
    static std::optional<Date> parse(std::string_view text);

    std::string to_iso() const;

    int serial() const { return serial_; }

    Date operator+(int days) const { return Date(serial_ + days); }
    Date operator-(int days) const { return Date(serial_ - days); }
    int operator-(Date other) const { return serial_ - other.serial_; }
    Date& operator++() { ++serial_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    int serial_ = 0;
};

} // namespace surgecast
