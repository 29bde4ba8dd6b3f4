#include "wdep/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wdep/stats.hpp"
#include "wdep/text.hpp"

namespace wdep {

namespace {

std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render(const CsvTable::Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    return escape(std::get<std::string>(cell));
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("CsvTable: row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t j = 0; j < header_.size(); ++j) out += (j ? "," : "") + escape(header_[j]);
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + render(row[j]);
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << str();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read series file '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    std::ptrdiff_t column = -1;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto cells = split(trim(line), ',');
        if (cells.size() == 1 && cells[0].empty()) continue;
        if (column < 0) {
            for (std::size_t j = 0; j < cells.size(); ++j)
                if (cells[j] == "value") column = static_cast<std::ptrdiff_t>(j);
            if (column >= 0) continue;
            if (cells.size() != 1) throw std::runtime_error(path.string() + ": expected header 't,value'");
            column = 0;
        }
        if (static_cast<std::size_t>(column) >= cells.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": missing value column");
        try {
            values.push_back(parse_real(cells[static_cast<std::size_t>(column)]));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (values.empty()) throw std::runtime_error(path.string() + ": no values");
    return values;
}

std::vector<double> read_real_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const auto s = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (s.empty()) continue;
        try {
            values.push_back(parse_real(s));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return values;
}

}  // namespace wdep
