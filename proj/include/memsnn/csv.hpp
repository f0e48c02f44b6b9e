#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace memsnn {

/// Numeric CSV: header row, comma separated, LF line endings, every value
/// printed with 9 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::size_t columns_;
    std::filesystem::path path_;
};

std::string format_csv_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace memsnn
