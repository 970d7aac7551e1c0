#include "jamcast/timeutil.hpp"

#include <array>
#include <cstdio>

#include "jamcast/errors.hpp"

namespace jamcast {

std::int64_t days_from_civil(int year, int month, int day) {
    // Howard Hinnant's civil-days algorithm, era-based.
    year -= month <= 2;
    const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = static_cast<int>(y + (month <= 2));
}

}  // namespace

std::int64_t parse_iso_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char extra = '\0';
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3 ||
        text.size() != 10) {
        throw ParseError("invalid ISO date '" + text + "', expected YYYY-MM-DD");
    }
    if (m < 1 || m > 12 || d < 1 || d > 31) {
        throw ParseError("invalid ISO date '" + text + "': month/day out of range");
    }
    return days_from_civil(y, m, d) * kSecondsPerDay;
}

std::string format_iso_date(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    if (epoch_seconds < 0 && epoch_seconds % kSecondsPerDay != 0) --days;
    int y, m, d;
    civil_from_days(days, y, m, d);
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02d-%02d", y, m, d);
    return std::string(buf.data());
}

int seconds_since_midnight(std::int64_t timestamp) {
    if (timestamp <= 0) throw DomainError("timestamp must be strictly positive");
    return static_cast<int>(timestamp % kSecondsPerDay);
}

int day_of_week(std::int64_t timestamp) {
    if (timestamp <= 0) throw DomainError("timestamp must be strictly positive");
    // 1970-01-01 was a Thursday; Monday = 0 puts the epoch at index 3.
    return static_cast<int>((timestamp / kSecondsPerDay + 3) % 7);
}

}  // namespace jamcast
