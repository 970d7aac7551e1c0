#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jamcast/featureset.hpp"
#include "jamcast/svr.hpp"

namespace jamcast {

// Train/test week boundaries. Each *_end names the last day of its week; the
// covered interval is the half-open [start, end + 1 day).
struct WeekSplit {
    std::int64_t train_start = 0;
    std::int64_t train_end = 0;
    std::int64_t test_start = 0;
    std::int64_t test_end = 0;
};

// Checks both spans cover exactly 7 days and do not overlap.
void validate_week_split(const WeekSplit& split);

// Paired prediction/actual series for one road over the test week.
struct ForecastPoint {
    std::int64_t timestamp = 0;
    double predicted = 0.0;  // clamped to [0, 10]
    double actual = 0.0;
};

struct ForecastSeries {
    std::string road_id;
    std::vector<ForecastPoint> points;  // strictly increasing timestamps
};

using Dataset = std::vector<TrafficObservation>;

// Partition by the half-open week intervals; throws InsufficientDataError
// when either side ends up empty.
std::pair<Dataset, Dataset> split_weeks(const Dataset& dataset, const WeekSplit& split);

// Rows for one road, ordered by timestamp.
Dataset road_rows(const Dataset& dataset, const std::string& road_id);

// Sorted unique road ids.
std::vector<std::string> road_ids(const Dataset& dataset);

// Gap policy for the 5-minute cadence: forward-fill up to 3 consecutive
// missing slots (copying the previous row with an updated timestamp); longer
// gaps stay missing. Input must be a single road's rows.
Dataset regularize_road_series(const Dataset& rows);

// Fit the scaler on training rows only, then train. Needs >= 100 rows.
SvrModel train_road_model(const Dataset& train_set, const std::string& road_id,
                          const SvrHyperparams& hp, std::uint64_t seed);

// One clamped prediction per test row, paired with the recorded jam factor.
ForecastSeries forecast_week(const SvrModel& model, const Dataset& test_rows_for_road);

// Validation protocol: fit on days 1-6 of the training week, validate on
// day 7; returns the grid point with minimal validation RMSE (ties keep the
// earliest grid entry). Throws SearchFailedError when every point fails.
SvrHyperparams grid_search(const Dataset& train_set, const std::string& road_id,
                           const std::vector<SvrHyperparams>& grid, std::uint64_t seed);

}  // namespace jamcast
