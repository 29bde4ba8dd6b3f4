#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace wdep {

/// Header plus rows; doubles use the shortest round-trip form, so equal
/// inputs give byte-identical files.
class CsvTable {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<Cell> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

/// Reads the `value` column of a CSV with header `t,value` (or a single
/// unlabeled column of numbers).
std::vector<double> read_series_csv(const std::filesystem::path& path);

/// One real per line; blank lines and `#` comments skipped.
std::vector<double> read_real_lines(const std::filesystem::path& path);

}  // namespace wdep
