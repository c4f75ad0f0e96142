#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace promptcast {

/// Proleptic-Gregorian calendar date backed by a serial day count.
class Date {
public:
    Date() = default;

    /// Throws DataError if (year, month, day) is not a valid calendar date.
    Date(int year, unsigned month, unsigned day);

    /// Parses "YYYY-MM-DD"; throws DataError on malformed input.
    static Date from_iso(std::string_view text);
    static std::optional<Date> try_from_iso(std::string_view text);

    /// "YYYY-MM-DD"
    std::string iso() const;

    int year() const;
    unsigned month() const;  // 1..12
    unsigned day() const;    // 1..31

    /// 0 = Sunday .. 6 = Saturday
    unsigned weekday_index() const;

    Date plus_days(int n) const;

    /// Whole days, a - b.
    friend int operator-(Date a, Date b) {
        return static_cast<int>((a.serial_ - b.serial_).count());
    }

    friend bool operator==(Date a, Date b) { return a.serial_ == b.serial_; }
    friend std::strong_ordering operator<=>(Date a, Date b) {
        return a.serial_.time_since_epoch().count() <=>
               b.serial_.time_since_epoch().count();
    }

private:
    explicit Date(std::chrono::sys_days d) : serial_(d) {}
    std::chrono::sys_days serial_{};
};

/// Number of days in [first, last], inclusive.
inline int days_inclusive(Date first, Date last) { return (last - first) + 1; }

}  // namespace promptcast
