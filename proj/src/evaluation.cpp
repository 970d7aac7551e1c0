#include "jamcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jamcast/errors.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/timeutil.hpp"

namespace jamcast {

double rmse(const EvaluationSeries& series) {
    if (series.actual.empty() || series.actual.size() != series.predicted.size()) {
        throw ShapeError("rmse: equal nonzero lengths required");
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < series.actual.size(); ++i) {
        const double d = series.actual[i] - series.predicted[i];
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(series.actual.size()));
}

EvaluationReport build_report(const std::vector<ForecastSeries>& forecasts,
                              const std::string& label) {
    if (forecasts.empty()) throw ShapeError("build_report: no forecast series");
    std::map<std::string, double> per_road;
    for (const auto& fs : forecasts) {
        if (fs.points.empty()) {
            throw ShapeError("build_report: empty series for road " + fs.road_id);
        }
        EvaluationSeries series;
        series.actual.reserve(fs.points.size());
        series.predicted.reserve(fs.points.size());
        for (const auto& p : fs.points) {
            series.actual.push_back(p.actual);
            series.predicted.push_back(p.predicted);
        }
        per_road[fs.road_id] = rmse(series);
    }
    return build_report_from_rmse(per_road, label);
}

EvaluationReport build_report_from_rmse(const std::map<std::string, double>& per_road,
                                        const std::string& label) {
    if (per_road.empty()) throw ShapeError("build_report: no roads");
    EvaluationReport report;
    report.per_road = per_road;
    report.method_label = label;
    double sum = 0.0;
    for (const auto& [road, value] : per_road) sum += value;
    report.average_rmse = sum / static_cast<double>(per_road.size());
    return report;
}

std::vector<ComparisonRow> compare_reports(const EvaluationReport& proposed,
                                           const EvaluationReport& baseline) {
    std::string missing;
    for (const auto& [road, _] : proposed.per_road) {
        if (!baseline.per_road.count(road)) missing += " -" + road;
    }
    for (const auto& [road, _] : baseline.per_road) {
        if (!proposed.per_road.count(road)) missing += " +" + road;
    }
    if (!missing.empty()) {
        throw ValidationError("compare_reports: road sets differ:" + missing);
    }
    std::vector<ComparisonRow> rows;
    rows.reserve(proposed.per_road.size() + 1);
    for (const auto& [road, value] : proposed.per_road) {
        rows.push_back({road, value, baseline.per_road.at(road)});
    }
    rows.push_back({"average", proposed.average_rmse, baseline.average_rmse});
    return rows;
}

std::map<std::string, ForecastSeries> naive_baselines(const Dataset& test_set,
                                                      const Dataset& train_set,
                                                      const std::string& road_id) {
    Dataset test_rows, train_rows;
    for (const auto& obs : test_set) {
        if (obs.road_id == road_id) test_rows.push_back(obs);
    }
    for (const auto& obs : train_set) {
        if (obs.road_id == road_id) train_rows.push_back(obs);
    }
    if (test_rows.empty() || train_rows.empty()) {
        throw InsufficientDataError("naive_baselines: no rows for road " + road_id);
    }
    std::map<std::int64_t, double> train_jam;
    double train_mean = 0.0;
    for (const auto& obs : train_rows) {
        train_jam[obs.timestamp] = obs.jam_factor;
        train_mean += obs.jam_factor;
    }
    train_mean /= static_cast<double>(train_rows.size());

    ForecastSeries persistence{road_id, {}};
    ForecastSeries global_mean{road_id, {}};
    for (const auto& obs : test_rows) {
        const auto it = train_jam.find(obs.timestamp - kSecondsPerWeek);
        if (it == train_jam.end()) {
            throw InsufficientDataError(
                "naive_baselines: no aligned training slot for timestamp " +
                std::to_string(obs.timestamp) + " on road " + road_id);
        }
        persistence.points.push_back({obs.timestamp, it->second, obs.jam_factor});
        global_mean.points.push_back({obs.timestamp, train_mean, obs.jam_factor});
    }
    return {{"persistence_last_week", std::move(persistence)},
            {"global_mean", std::move(global_mean)}};
}

void write_report_csv(const std::vector<EvaluationReport>& reports,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open report CSV for writing: " + path);
    out << "road_id,method,rmse\n";
    for (const auto& report : reports) {
        for (const auto& [road, value] : report.per_road) {
            out << road << ',' << report.method_label << ',' << format_double(value) << '\n';
        }
        out << "average," << report.method_label << ','
            << format_double(report.average_rmse) << '\n';
    }
    if (!out) throw Error("failed writing report CSV: " + path);
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open comparison CSV for writing: " + path);
    out << "road_id,rmse_proposed,rmse_amwr\n";
    for (const auto& row : rows) {
        out << row.road_id << ',' << format_double(row.proposed) << ','
            << format_double(row.baseline) << '\n';
    }
    if (!out) throw Error("failed writing comparison CSV: " + path);
}

}  // namespace jamcast
