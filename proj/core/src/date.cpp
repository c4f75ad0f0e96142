#include "promptcast/date.hpp"

#include <cctype>
#include <cstdio>

#include "promptcast/errors.hpp"

namespace promptcast {

namespace chr = std::chrono;

namespace {

chr::year_month_day to_ymd(chr::sys_days d) { return chr::year_month_day{d}; }

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok()) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "invalid calendar date %d-%02u-%02u", year, month, day);
        throw DataError(buf);
    }
    serial_ = chr::sys_days{ymd};
}

Date Date::from_iso(std::string_view text) {
    auto d = try_from_iso(text);
    if (!d) throw DataError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    return *d;
}

std::optional<Date> Date::try_from_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    const auto y = text.substr(0, 4);
    const auto m = text.substr(5, 2);
    const auto d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
    const int year = (y[0] - '0') * 1000 + (y[1] - '0') * 100 + (y[2] - '0') * 10 + (y[3] - '0');
    const unsigned month = static_cast<unsigned>((m[0] - '0') * 10 + (m[1] - '0'));
    const unsigned day = static_cast<unsigned>((d[0] - '0') * 10 + (d[1] - '0'));
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok()) return std::nullopt;
    return Date{chr::sys_days{ymd}};
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

int Date::year() const { return static_cast<int>(to_ymd(serial_).year()); }

unsigned Date::month() const { return static_cast<unsigned>(to_ymd(serial_).month()); }

unsigned Date::day() const { return static_cast<unsigned>(to_ymd(serial_).day()); }

unsigned Date::weekday_index() const { return chr::weekday{serial_}.c_encoding(); }

Date Date::plus_days(int n) const { return Date{serial_ + chr::days{n}}; }

}  // namespace promptcast
