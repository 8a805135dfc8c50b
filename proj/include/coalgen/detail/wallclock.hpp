#pragma once

// Naive wall-clock timestamps, minute precision, rendered "YYYY-MM-DD HH:MM".
// No timezone handling by design: the strings are opaque local times.

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "coalgen/errors.hpp"

namespace coalgen::detail {

struct WallClock {
    std::chrono::sys_days day{};
    std::chrono::minutes time_of_day{};
};

inline bool is_digits(std::string_view s) {
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return !s.empty();
}

inline WallClock parse_wallclock(std::string_view s) {
    // strict shape: dddd-dd-dd dd:dd
    auto fail = [&] { throw ConfigError("invalid timestamp '" + std::string(s) + "', expected YYYY-MM-DD HH:MM"); };
    if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':') fail();
    if (!is_digits(s.substr(0, 4)) || !is_digits(s.substr(5, 2)) || !is_digits(s.substr(8, 2)) ||
        !is_digits(s.substr(11, 2)) || !is_digits(s.substr(14, 2)))
        fail();
    int y = std::stoi(std::string(s.substr(0, 4)));
    unsigned mo = static_cast<unsigned>(std::stoi(std::string(s.substr(5, 2))));
    unsigned d = static_cast<unsigned>(std::stoi(std::string(s.substr(8, 2))));
    int h = std::stoi(std::string(s.substr(11, 2)));
    int mi = std::stoi(std::string(s.substr(14, 2)));
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
    if (!ymd.ok() || h > 23 || mi > 59) fail();
    return WallClock{std::chrono::sys_days{ymd}, std::chrono::hours{h} + std::chrono::minutes{mi}};
}

inline std::string format_wallclock(const WallClock& wc) {
    std::chrono::year_month_day ymd{wc.day};
    auto mins = wc.time_of_day.count();
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02d:%02d", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), static_cast<int>(mins / 60),
                  static_cast<int>(mins % 60));
    return std::string(buf);
}

inline std::string add_minutes(std::string_view timestamp, long long minutes) {
    WallClock wc = parse_wallclock(timestamp);
    auto total = wc.time_of_day + std::chrono::minutes{minutes};
    auto days_carry = std::chrono::floor<std::chrono::days>(total);
    wc.day += days_carry;
    wc.time_of_day = total - days_carry;
    return format_wallclock(wc);
}

// Minutes since epoch; handy for ordering comparisons in tests.
inline long long wallclock_minutes(std::string_view timestamp) {
    WallClock wc = parse_wallclock(timestamp);
    return std::chrono::duration_cast<std::chrono::minutes>(wc.day.time_since_epoch()).count() +
           wc.time_of_day.count();
}

}  // namespace coalgen::detail
