#include "qwalk/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed for " + path.string());
    }
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string checksum_string(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

double parse_double(const std::string& token, const std::filesystem::path& path) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        throw IoError("unparseable number '" + token + "' in " + path.string());
    }
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string file_checksum(const std::filesystem::path& path) {
    return checksum_string(read_file(path));
}

std::string write_series_csv(const CentroidSeries& series, const std::filesystem::path& path) {
    std::string out = "t,x_mean,x_r,x_l,x_stderr\n";
    for (std::size_t t = 0; t < series.x_mean.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_double(series.x_mean[t]);
        out += ',';
        out += format_double(series.x_r[t]);
        out += ',';
        out += format_double(series.x_l[t]);
        out += ',';
        out += format_double(series.x_stderr[t]);
        out += '\n';
    }
    write_file(path, out);
    return checksum_string(out);
}

CentroidSeries read_series_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv_columns(path);
    if (table.header != std::vector<std::string>{"t", "x_mean", "x_r", "x_l", "x_stderr"}) {
        throw IoError("unexpected series header in " + path.string());
    }
    CentroidSeries series;
    series.x_mean = table.columns[1];
    series.x_r = table.columns[2];
    series.x_l = table.columns[3];
    series.x_stderr = table.columns[4];
    series.samples = 0; // not recorded in the CSV
    return series;
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw IoError("column '" + name + "' not found");
}

CsvTable read_csv_columns(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty CSV " + path.string());
    }
    CsvTable table;
    {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            table.header.push_back(cell);
        }
    }
    table.columns.assign(table.header.size(), {});
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ls, cell, ',')) {
            if (col >= table.header.size()) {
                throw IoError("row wider than header in " + path.string());
            }
            table.columns[col].push_back(parse_double(cell, path));
            ++col;
        }
        if (col != table.header.size()) {
            throw IoError("row narrower than header in " + path.string());
        }
    }
    return table;
}

} // namespace qwalk
