// io.hpp — CSV emission/parsing and file checksums.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qwalk/ensemble.hpp"

namespace qwalk {

// FNV-1a 64-bit over the file bytes, rendered as "fnv1a:<16 hex digits>".
std::string file_checksum(const std::filesystem::path& path);

// Header "t,x_mean,x_r,x_l,x_stderr", one row per time index, values printed
// with 17 significant digits (round-trip exact for doubles), '\n' newlines.
// Returns the checksum of the written file.
std::string write_series_csv(const CentroidSeries& series, const std::filesystem::path& path);

// Inverse of write_series_csv; round-trips exactly.
CentroidSeries read_series_csv(const std::filesystem::path& path);

// Generic numeric CSV: first line is the header, every following row must
// parse as doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    // Index of a named column; throws IoError when absent.
    std::size_t column_index(const std::string& name) const;
};

CsvTable read_csv_columns(const std::filesystem::path& path);

// "%.17g" rendering used for every double written to CSV.
std::string format_double(double v);

} // namespace qwalk
