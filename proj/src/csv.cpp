#include "residlab/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "residlab/errors.hpp"

namespace residlab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& context) {
    const char* begin = token.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE)
        throw IoError(context + ": cannot parse number '" + token + "'");
    return v;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw IoError("CSV column '" + name + "' not found");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file " + path.string());
    CsvTable table;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        if (table.header.empty()) {
            table.header = fields;
            continue;
        }
        if (fields.size() != table.header.size())
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_double(f, path.string() + ":" + std::to_string(lineno)));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw IoError(path.string() + ": missing header line");
    return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write CSV file " + path.string());
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<double> read_spectrum_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t rc = table.column("r");
    const std::size_t ec = table.column("E");
    std::vector<double> shells;
    for (const auto& row : table.rows) {
        const double rd = row[rc];
        const long r = std::lround(rd);
        if (r < 1 || std::abs(rd - static_cast<double>(r)) > 1e-9)
            throw IoError(path.string() + ": shell index must be a positive integer, got " +
                          format_double(rd));
        if (shells.size() <= static_cast<std::size_t>(r)) shells.resize(static_cast<std::size_t>(r) + 1, 0.0);
        if (row[ec] < 0.0) throw IoError(path.string() + ": negative spectrum entry");
        shells[static_cast<std::size_t>(r)] = row[ec];
    }
    if (shells.empty()) throw IoError(path.string() + ": empty spectrum");
    return shells;
}

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& shells) {
    CsvTable table;
    table.header = {"r", "E"};
    for (std::size_t r = 1; r < shells.size(); ++r)
        table.rows.push_back({static_cast<double>(r), shells[r]});
    write_csv(path, table);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace residlab
