#include "memsnn/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace memsnn {

std::string format_csv_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()), path_(path)
{
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k) {
        out_ << (k ? "," : "") << header[k];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    if (values.size() != columns_) {
        throw std::logic_error("csv row width mismatch in " + path_.string());
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        out_ << (k ? "," : "") << format_csv_number(values[k]);
    }
    out_ << '\n';
}

void CsvWriter::close()
{
    out_.close();
    if (!out_) throw std::runtime_error("error writing " + path_.string());
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    throw std::out_of_range("no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        if (first) {
            while (std::getline(fields, cell, ',')) table.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace memsnn
