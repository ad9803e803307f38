#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace swarmnews {

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;
};

// Year-month key used by the monthly split.
struct YearMonth {
    int year = 0;
    int month = 0;

    auto operator<=>(const YearMonth&) const = default;

    YearMonth next() const {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }
};

inline YearMonth year_month(const Date& d) { return {d.year, d.month}; }

inline std::string to_string(const YearMonth& ym) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", ym.year, ym.month);
    return buf;
}

namespace detail {

inline constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

inline int days_in_month(int year, int month) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return days[month - 1];
}

inline bool valid_date(int year, int month, int day) {
    return year >= 1 && month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

inline char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Matches a month by full name or 3-letter abbreviation, case-insensitive.
inline int month_from_name(std::string_view name) {
    if (name.size() < 3) return 0;
    std::string low;
    low.reserve(name.size());
    for (char c : name) low.push_back(lower(c));
    for (int m = 0; m < 12; ++m) {
        const auto& full = kMonthNames[m];
        if (low == full || (low.size() == 3 && full.substr(0, 3) == low)) return m + 1;
    }
    return 0;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_int(std::string_view s, int& out) {
    if (s.empty() || s.size() > 4) return false;
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

// Accepts the raw dataset's three formats: "December 31, 2017",
// "Dec 31, 2017" and "31-Dec-17". Anything else parses to nullopt.
inline std::optional<Date> parse_article_date(std::string_view raw) {
    using namespace detail;
    const std::string_view s = trim(raw);
    if (s.empty()) return std::nullopt;

    // "31-Dec-17"
    if (const auto h1 = s.find('-'); h1 != std::string_view::npos) {
        const auto h2 = s.find('-', h1 + 1);
        if (h2 == std::string_view::npos) return std::nullopt;
        int day = 0, year2 = 0;
        const int month = month_from_name(trim(s.substr(h1 + 1, h2 - h1 - 1)));
        if (!parse_int(trim(s.substr(0, h1)), day) || month == 0 ||
            !parse_int(trim(s.substr(h2 + 1)), year2))
            return std::nullopt;
        if (year2 > 99) return std::nullopt;
        const int year = 2000 + year2;
        if (!valid_date(year, month, day)) return std::nullopt;
        return Date{year, month, day};
    }

    // "December 31, 2017" / "Dec 31, 2017"
    const auto sp = s.find(' ');
    if (sp == std::string_view::npos) return std::nullopt;
    const auto comma = s.find(',', sp);
    if (comma == std::string_view::npos) return std::nullopt;
    const int month = month_from_name(trim(s.substr(0, sp)));
    int day = 0, year = 0;
    if (month == 0 || !parse_int(trim(s.substr(sp + 1, comma - sp - 1)), day) ||
        !parse_int(trim(s.substr(comma + 1)), year))
        return std::nullopt;
    if (year < 100) return std::nullopt;
    if (!valid_date(year, month, day)) return std::nullopt;
    return Date{year, month, day};
}

}  // namespace swarmnews
