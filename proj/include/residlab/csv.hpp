#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace residlab {

/// Shortest round-trip decimal form of a double (std::to_chars), so parsing
/// and re-emitting a CSV is byte-idempotent.
std::string format_double(double v);

/// Strict double parse of a whole token.
double parse_double(const std::string& token, const std::string& context);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;  // throws IoError if absent
};

/// Read a headered comma-separated table; errors carry path and line number.
CsvTable read_csv(const std::filesystem::path& path);

/// Write a headered table with format_double cells.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Read a two-column (r, E) spectrum file into a shell-indexed vector.
std::vector<double> read_spectrum_csv(const std::filesystem::path& path);

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& shells);

/// Write a text file verbatim (gnuplot scripts and the like).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace residlab
