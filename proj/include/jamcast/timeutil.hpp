#pragma once

#include <cstdint>
#include <string>

namespace jamcast {

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kSecondsPerWeek = 7 * kSecondsPerDay;
inline constexpr std::int64_t kSlotSeconds = 300;  // 5-minute collection cadence

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);

// "YYYY-MM-DD" -> epoch seconds at 00:00 UTC. Throws ParseError.
std::int64_t parse_iso_date(const std::string& text);

// Epoch seconds -> "YYYY-MM-DD" (UTC, time-of-day discarded).
std::string format_iso_date(std::int64_t epoch_seconds);

// Seconds past UTC midnight, in [0, 86400). Requires timestamp > 0.
int seconds_since_midnight(std::int64_t timestamp);

// Day of week with Monday = 0 ... Sunday = 6. Requires timestamp > 0.
int day_of_week(std::int64_t timestamp);

}  // namespace jamcast
