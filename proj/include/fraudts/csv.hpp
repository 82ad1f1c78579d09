#pragma once

#include <string>
#include <vector>

namespace fraudts {

/// Minimal CSV support: comma-separated, newline-terminated rows, no quoting.
/// All file formats emitted and consumed here are plain (field values never
/// contain commas).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws DataFormatError when absent.
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_csv(const std::string& path, const CsvTable& table);

/// Full-precision decimal formatting for doubles (round-trip exact).
std::string format_double(double v);

/// Fixed-point formatting with the given number of decimals.
std::string format_fixed(double v, int decimals);

} // namespace fraudts
