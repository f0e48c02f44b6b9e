#include "memsnn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace memsnn {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v) const
    {
        const double a = log ? std::log10(v) : v;
        return (a - lo) / (hi - lo);
    }
};

Axis fit_axis(const std::vector<double>& values, bool log)
{
    Axis ax;
    ax.log = log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (log && !(v > 0.0)) continue;
        const double a = log ? std::log10(v) : v;
        if (!std::isfinite(a)) continue;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (!(lo <= hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-300) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    ax.lo = lo - pad;
    ax.hi = hi + pad;
    return ax;
}

} // namespace

void write_svg_plot(const CsvTable& table, const PlotSpec& spec, const std::filesystem::path& svg)
{
    const std::size_t xc = table.column(spec.x_column);
    std::vector<std::size_t> ycs;
    for (const std::string& y : spec.y_columns) ycs.push_back(table.column(y));

    std::vector<double> xs, ys;
    for (const auto& row : table.rows) {
        xs.push_back(row[xc]);
        for (std::size_t c : ycs) ys.push_back(spec.log_y ? std::abs(row[c]) : row[c]);
    }
    const Axis ax = fit_axis(xs, spec.log_x);
    const Axis ay = fit_axis(ys, spec.log_y);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double v) { return kLeft + ax.map(v) * pw; };
    const auto py = [&](double v) { return kTop + (1.0 - ay.map(v)) * ph; };

    std::ofstream out(svg, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + svg.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(spec.title) << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
        const double x = kLeft + pw * k / 4.0;
        const double y = kTop + ph * (1.0 - k / 4.0);
        out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
            << num(ax.log ? std::pow(10.0, fx) : fx) << "</text>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
            << num(ay.log ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    out << "<text transform=\"translate(16," << kTop + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

    for (std::size_t s = 0; s < ycs.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        std::string points;
        for (const auto& row : table.rows) {
            double y = row[ycs[s]];
            if (spec.log_y) y = std::abs(y);
            if ((spec.log_x && !(row[xc] > 0.0)) || (spec.log_y && !(y > 0.0))) continue;
            if (spec.markers) {
                out << "<circle cx=\"" << px(row[xc]) << "\" cy=\"" << py(y)
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            } else {
                points += num(px(row[xc])) + ',' + num(py(y)) + ' ';
            }
        }
        if (!spec.markers) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\""
                << points << "\"/>\n";
        }
        out << "<text x=\"" << kLeft + pw - 4 << "\" y=\"" << kTop + 14 + 14 * s
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(spec.y_columns[s])
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace memsnn
