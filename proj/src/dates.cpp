#include "fraudts/dates.hpp"

#include "fraudts/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace fraudts {

namespace {

constexpr std::array<int, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int parse_int(const std::string& s, std::size_t pos, std::size_t len) {
    if (pos + len > s.size()) throw DataFormatError("truncated timestamp: " + s);
    int value = 0;
    const auto* first = s.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw DataFormatError("non-numeric timestamp field: " + s);
    }
    return value;
}

} // namespace

std::int64_t days_from_civil(int y, int m, int d) {
    // Howard Hinnant's algorithm.
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

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

bool valid_civil(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1) return false;
    int dim = kDaysInMonth[static_cast<std::size_t>(month - 1)];
    if (month == 2 && is_leap(year)) dim = 29;
    return day <= dim;
}

std::string format_date(Date d) {
    int y = 0, m = 0, dd = 0;
    civil_from_days(d.days_since_epoch, y, m, dd);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, dd);
    return buf;
}

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataFormatError("expected YYYY-MM-DD date, got: " + text);
    }
    const int y = parse_int(text, 0, 4);
    const int m = parse_int(text, 5, 2);
    const int d = parse_int(text, 8, 2);
    if (!valid_civil(y, m, d)) throw DataFormatError("invalid calendar date: " + text);
    return Date{days_from_civil(y, m, d)};
}

Date parse_timestamp_date(const std::string& text) {
    if (text.size() < 10) throw DataFormatError("timestamp too short: " + text);
    const int y = parse_int(text, 0, 4);
    if (text[4] != '-' || text[7] != '-') throw DataFormatError("malformed date: " + text);
    const int mo = parse_int(text, 5, 2);
    const int d = parse_int(text, 8, 2);
    if (!valid_civil(y, mo, d)) throw DataFormatError("invalid calendar date: " + text);

    if (text.size() == 10) return Date{days_from_civil(y, mo, d)};
    if (text[10] != 'T' && text[10] != ' ') throw DataFormatError("malformed timestamp: " + text);
    if (text.size() < 19 || text[13] != ':' || text[16] != ':') {
        throw DataFormatError("malformed time of day: " + text);
    }
    const int hh = parse_int(text, 11, 2);
    const int mi = parse_int(text, 14, 2);
    const int ss = parse_int(text, 17, 2);
    if (hh > 23 || mi > 59 || ss > 60) throw DataFormatError("invalid time of day: " + text);

    std::size_t pos = 19;
    while (pos < text.size() && (text[pos] == '.' || (text[pos] >= '0' && text[pos] <= '9'))) {
        ++pos; // fractional seconds, ignored
    }

    std::int64_t offset_seconds = 0;
    if (pos < text.size()) {
        const char c = text[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            if (pos + 6 > text.size() || text[pos + 3] != ':') {
                throw DataFormatError("malformed UTC offset: " + text);
            }
            const int oh = parse_int(text, pos + 1, 2);
            const int om = parse_int(text, pos + 4, 2);
            offset_seconds = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
            pos += 6;
        }
    }
    if (pos != text.size()) throw DataFormatError("trailing characters in timestamp: " + text);

    std::int64_t secs = days_from_civil(y, mo, d) * 86400LL + hh * 3600LL + mi * 60LL + ss;
    secs -= offset_seconds; // local -> UTC
    std::int64_t days = secs / 86400;
    if (secs < 0 && secs % 86400 != 0) --days;
    return Date{days};
}

} // namespace fraudts
