#pragma once

#include "memsnn/csv.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace memsnn {

struct PlotSpec {
    std::string title;
    std::string x_column;
    std::vector<std::string> y_columns;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    bool markers = false;  ///< draw points instead of polylines
};

/// Minimal SVG line/scatter chart of columns of an already written CSV.
void write_svg_plot(const CsvTable& table, const PlotSpec& spec, const std::filesystem::path& svg);

} // namespace memsnn
