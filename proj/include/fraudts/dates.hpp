#pragma once

#include <cstdint>
#include <string>

namespace fraudts {

/// Calendar date, UTC. Stored as days since 1970-01-01.
struct Date {
    std::int64_t days_since_epoch = 0;

    Date() = default;
    explicit Date(std::int64_t days) : days_since_epoch(days) {}

    Date operator+(std::int64_t d) const { return Date{days_since_epoch + d}; }
    std::int64_t operator-(Date other) const { return days_since_epoch - other.days_since_epoch; }
    auto operator<=>(const Date&) const = default;
};

/// days since epoch for a civil y/m/d (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);

/// inverse of days_from_civil.
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

bool valid_civil(int year, int month, int day);

/// "YYYY-MM-DD".
std::string format_date(Date d);

/// Parse an ISO-8601 timestamp ("YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM]")
/// and return the UTC calendar date. Throws DataFormatError on malformed input.
Date parse_timestamp_date(const std::string& text);

/// Parse a plain "YYYY-MM-DD" date.
Date parse_date(const std::string& text);

} // namespace fraudts
