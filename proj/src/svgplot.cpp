#include "jamcast/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jamcast/errors.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/timeutil.hpp"

namespace jamcast {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 360;
constexpr int kMarginLeft = 56;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 44;

std::string num(double v) { return format_fixed(v, 2); }

void open_svg(std::ostream& out, int w, int h) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
}

void text(std::ostream& out, double x, double y, const std::string& s,
          const char* anchor = "start", int size = 12) {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\""
        << " font-size=\"" << size << "\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
}

void polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts,
              const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& [x, y] : pts) out << num(x) << ',' << num(y) << ' ';
    out << "\"/>\n";
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open SVG for writing: " + path);
    out << body;
    if (!out) throw Error("failed writing SVG: " + path);
}

}  // namespace

void write_forecast_svg(const ForecastSeries& series, const std::string& title,
                        const std::string& path) {
    if (series.points.empty()) throw ShapeError("write_forecast_svg: empty series");
    const double t0 = static_cast<double>(series.points.front().timestamp);
    const double t1 = static_cast<double>(series.points.back().timestamp);
    const double t_span = std::max(1.0, t1 - t0);
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    const auto sx = [&](double t) { return x0 + (t - t0) / t_span * (x1 - x0); };
    const auto sy = [&](double jam) { return y0 + jam / 10.0 * (y1 - y0); };

    std::ostringstream out;
    open_svg(out, kWidth, kHeight);
    text(out, kWidth / 2.0, 20, title, "middle", 14);

    // Jam-factor gridlines every 2 units.
    for (int jam = 0; jam <= 10; jam += 2) {
        out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(sy(jam)) << "\" x2=\""
            << num(x1) << "\" y2=\"" << num(sy(jam))
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        text(out, x0 - 8, sy(jam) + 4, std::to_string(jam), "end", 11);
    }
    // One tick per day.
    for (double t = t0; t <= t1 + 1.0; t += static_cast<double>(kSecondsPerDay)) {
        out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(y0) << "\" x2=\""
            << num(sx(t)) << "\" y2=\"" << num(y0 + 5)
            << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        text(out, sx(t), y0 + 18, format_iso_date(static_cast<std::int64_t>(t)), "middle", 10);
    }

    std::vector<std::pair<double, double>> actual, predicted;
    actual.reserve(series.points.size());
    predicted.reserve(series.points.size());
    for (const auto& p : series.points) {
        actual.emplace_back(sx(static_cast<double>(p.timestamp)), sy(p.actual));
        predicted.emplace_back(sx(static_cast<double>(p.timestamp)), sy(p.predicted));
    }
    polyline(out, actual, "#1f77b4");
    polyline(out, predicted, "#d62728");

    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
        << "\" y2=\"" << num(y0) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
        << "\" y2=\"" << num(y1) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    text(out, 16, (y0 + y1) / 2, "jam factor", "middle", 11);

    // Legend.
    out << "<line x1=\"" << num(x1 - 150) << "\" y1=\"" << num(y1) << "\" x2=\""
        << num(x1 - 120) << "\" y2=\"" << num(y1)
        << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    text(out, x1 - 114, y1 + 4, "actual");
    out << "<line x1=\"" << num(x1 - 64) << "\" y1=\"" << num(y1) << "\" x2=\""
        << num(x1 - 34) << "\" y2=\"" << num(y1)
        << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    text(out, x1 - 28, y1 + 4, "predicted");

    out << "</svg>\n";
    write_file(path, out.str());
}

void write_comparison_bars_svg(const std::vector<ComparisonRow>& rows,
                               const std::string& proposed_label,
                               const std::string& baseline_label,
                               const std::string& path) {
    if (rows.empty()) throw ShapeError("write_comparison_bars_svg: no rows");
    double max_rmse = 0.0;
    for (const auto& row : rows) max_rmse = std::max({max_rmse, row.proposed, row.baseline});
    if (max_rmse <= 0.0) max_rmse = 1.0;

    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    const double group_w = (x1 - x0) / static_cast<double>(rows.size());
    const double bar_w = group_w * 0.32;
    const auto bar_h = [&](double v) { return v / (max_rmse * 1.15) * (y0 - y1); };

    std::ostringstream out;
    open_svg(out, kWidth, kHeight);
    text(out, kWidth / 2.0, 20, "RMSE: " + proposed_label + " vs " + baseline_label,
         "middle", 14);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double gx = x0 + group_w * (static_cast<double>(i) + 0.5);
        const double hp = bar_h(rows[i].proposed);
        const double hb = bar_h(rows[i].baseline);
        out << "<rect x=\"" << num(gx - bar_w - 2) << "\" y=\"" << num(y0 - hp)
            << "\" width=\"" << num(bar_w) << "\" height=\"" << num(hp)
            << "\" fill=\"#1f77b4\"/>\n";
        out << "<rect x=\"" << num(gx + 2) << "\" y=\"" << num(y0 - hb) << "\" width=\""
            << num(bar_w) << "\" height=\"" << num(hb) << "\" fill=\"#ff7f0e\"/>\n";
        text(out, gx - bar_w / 2 - 2, y0 - hp - 4, format_fixed(rows[i].proposed, 3),
             "middle", 10);
        text(out, gx + bar_w / 2 + 2, y0 - hb - 4, format_fixed(rows[i].baseline, 3),
             "middle", 10);
        text(out, gx, y0 + 16, rows[i].road_id, "middle", 11);
    }
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
        << "\" y2=\"" << num(y0) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // Legend.
    out << "<rect x=\"" << num(x1 - 190) << "\" y=\"" << num(y1 - 12)
        << "\" width=\"12\" height=\"12\" fill=\"#1f77b4\"/>\n";
    text(out, x1 - 174, y1 - 2, proposed_label);
    out << "<rect x=\"" << num(x1 - 90) << "\" y=\"" << num(y1 - 12)
        << "\" width=\"12\" height=\"12\" fill=\"#ff7f0e\"/>\n";
    text(out, x1 - 74, y1 - 2, baseline_label);
    out << "</svg>\n";
    write_file(path, out.str());
}

}  // namespace jamcast
