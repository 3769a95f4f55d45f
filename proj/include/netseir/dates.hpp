#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netseir {

struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;

    bool operator==(const CivilDate&) const = default;
};

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
constexpr std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr std::int64_t days_from_civil(const CivilDate& date) {
    return days_from_civil(date.year, date.month, date.day);
}

namespace detail {

inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

constexpr int days_in_month(int year, int month) {
    constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

}  // namespace detail

// Strict YYYY-MM-DD.
inline CivilDate parse_iso_date(std::string_view s) {
    CivilDate date;
    bool ok = s.size() == 10 && s[4] == '-' && s[7] == '-' &&
              detail::parse_fixed_uint(s, 0, 4, date.year) &&
              detail::parse_fixed_uint(s, 5, 2, date.month) &&
              detail::parse_fixed_uint(s, 8, 2, date.day);
    if (!ok || date.month < 1 || date.month > 12 || date.day < 1 ||
        date.day > detail::days_in_month(date.year, date.month)) {
        throw std::invalid_argument("invalid ISO date: '" + std::string(s) + "'");
    }
    return date;
}

// YYYY-MM-DD, optionally followed by [T ]HH:MM:SS and an optional trailing
// 'Z'. Interpreted as UTC; returns epoch seconds. Empty optional on parse
// failure (callers decide whether that is an error).
inline std::optional<std::int64_t> parse_iso_timestamp(std::string_view s) {
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    if (s.size() != 10 && s.size() != 19) return std::nullopt;

    CivilDate date;
    if (s.size() >= 10) {
        try {
            date = parse_iso_date(s.substr(0, 10));
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
    std::int64_t seconds = days_from_civil(date) * 86400;
    if (s.size() == 19) {
        if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
        int hh = 0, mm = 0, ss = 0;
        if (s[13] != ':' || s[16] != ':' ||
            !detail::parse_fixed_uint(s, 11, 2, hh) ||
            !detail::parse_fixed_uint(s, 14, 2, mm) ||
            !detail::parse_fixed_uint(s, 17, 2, ss) ||
            hh > 23 || mm > 59 || ss > 60) {
            return std::nullopt;
        }
        seconds += hh * 3600 + mm * 60 + ss;
    }
    return seconds;
}

}  // namespace netseir
