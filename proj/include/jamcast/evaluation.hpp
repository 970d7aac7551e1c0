#pragma once

#include <map>
#include <string>
#include <vector>

#include "jamcast/pipeline.hpp"

namespace jamcast {

// Actual/predicted value pairs feeding the error metric.
struct EvaluationSeries {
    std::vector<double> actual;
    std::vector<double> predicted;
};

struct EvaluationReport {
    std::map<std::string, double> per_road;  // road_id -> RMSE
    double average_rmse = 0.0;               // unweighted mean over roads
    std::string method_label;
};

// sqrt((1/n) sum (f_i - fhat_i)^2).
double rmse(const EvaluationSeries& series);

EvaluationReport build_report(const std::vector<ForecastSeries>& forecasts,
                              const std::string& label);
EvaluationReport build_report_from_rmse(const std::map<std::string, double>& per_road,
                                        const std::string& label);

struct ComparisonRow {
    std::string road_id;  // "average" for the trailing summary row
    double proposed = 0.0;
    double baseline = 0.0;
};

// One row per road (ordered by road_id) plus the average row. Both reports
// must cover the same road set.
std::vector<ComparisonRow> compare_reports(const EvaluationReport& proposed,
                                           const EvaluationReport& baseline);

// Yardstick forecasts: "persistence_last_week" repeats the value from the
// same weekday/time slot of the training week; "global_mean" predicts the
// training-set mean jam factor everywhere.
std::map<std::string, ForecastSeries> naive_baselines(const Dataset& test_set,
                                                      const Dataset& train_set,
                                                      const std::string& road_id);

// CSV export, header `road_id,method,rmse`; one block per report, each with
// a trailing `average` row.
void write_report_csv(const std::vector<EvaluationReport>& reports,
                      const std::string& path);

// Table II analog, header `road_id,rmse_proposed,rmse_amwr`.
void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path);

}  // namespace jamcast
