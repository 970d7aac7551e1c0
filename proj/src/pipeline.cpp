#include "jamcast/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "jamcast/errors.hpp"
#include "jamcast/evaluation.hpp"
#include "jamcast/timeutil.hpp"

namespace jamcast {

void validate_week_split(const WeekSplit& split) {
    const std::int64_t train_span = split.train_end + kSecondsPerDay - split.train_start;
    const std::int64_t test_span = split.test_end + kSecondsPerDay - split.test_start;
    if (train_span != kSecondsPerWeek || test_span != kSecondsPerWeek) {
        throw ValidationError("week split: each span must cover exactly 7 days");
    }
    if (split.train_end + kSecondsPerDay > split.test_start) {
        throw ValidationError("week split: training week must end before the test week");
    }
}

std::pair<Dataset, Dataset> split_weeks(const Dataset& dataset, const WeekSplit& split) {
    validate_week_split(split);
    Dataset train, test;
    for (const auto& obs : dataset) {
        if (obs.timestamp >= split.train_start &&
            obs.timestamp < split.train_end + kSecondsPerDay) {
            train.push_back(obs);
        } else if (obs.timestamp >= split.test_start &&
                   obs.timestamp < split.test_end + kSecondsPerDay) {
            test.push_back(obs);
        }
    }
    if (train.empty() || test.empty()) {
        throw InsufficientDataError("split_weeks: a week partition came up empty");
    }
    return {std::move(train), std::move(test)};
}

Dataset road_rows(const Dataset& dataset, const std::string& road_id) {
    Dataset rows;
    for (const auto& obs : dataset) {
        if (obs.road_id == road_id) rows.push_back(obs);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    return rows;
}

std::vector<std::string> road_ids(const Dataset& dataset) {
    std::set<std::string> ids;
    for (const auto& obs : dataset) ids.insert(obs.road_id);
    return {ids.begin(), ids.end()};
}

Dataset regularize_road_series(const Dataset& rows) {
    constexpr int kMaxFill = 3;
    Dataset out;
    out.reserve(rows.size());
    for (const auto& obs : rows) {
        if (!out.empty()) {
            if (obs.timestamp <= out.back().timestamp) {
                throw ValidationError("regularize_road_series: timestamps must increase");
            }
            const std::int64_t gap = obs.timestamp - out.back().timestamp;
            const std::int64_t missing = gap / kSlotSeconds - 1;
            if (gap % kSlotSeconds == 0 && missing >= 1 && missing <= kMaxFill) {
                TrafficObservation fill = out.back();
                for (std::int64_t k = 0; k < missing; ++k) {
                    fill.timestamp += kSlotSeconds;
                    out.push_back(fill);
                }
            }
        }
        out.push_back(obs);
    }
    return out;
}

SvrModel train_road_model(const Dataset& train_set, const std::string& road_id,
                          const SvrHyperparams& hp, std::uint64_t seed) {
    const Dataset rows = road_rows(train_set, road_id);
    if (rows.size() < 100) {
        throw InsufficientDataError("train_road_model: road " + road_id + " has " +
                                    std::to_string(rows.size()) +
                                    " training rows, need at least 100");
    }
    std::vector<EncodedSample> encoded(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) encoded[i] = encode_observation(rows[i]);
    const ScalerParams scaler = fit_scaler(encoded);
    for (auto& s : encoded) s = apply_scaler(scaler, s);
    SvrModel model = train_svr(encoded, hp, seed);
    model.scaler = scaler;
    return model;
}

ForecastSeries forecast_week(const SvrModel& model, const Dataset& test_rows_for_road) {
    if (model.feature_layout_tag != kFeatureLayoutTag) {
        throw ShapeError("forecast_week: model feature layout '" + model.feature_layout_tag +
                         "' does not match this build's layout");
    }
    ForecastSeries series;
    if (!test_rows_for_road.empty()) series.road_id = test_rows_for_road.front().road_id;
    for (const auto& obs : test_rows_for_road) {
        const EncodedSample sample = encode_observation(obs);
        const double raw = predict(model, scale_features(model.scaler, sample.features));
        series.points.push_back({obs.timestamp, std::clamp(raw, 0.0, 10.0), obs.jam_factor});
    }
    return series;
}

SvrHyperparams grid_search(const Dataset& train_set, const std::string& road_id,
                           const std::vector<SvrHyperparams>& grid, std::uint64_t seed) {
    if (grid.empty()) throw SearchFailedError("grid_search: empty hyperparameter grid");
    const Dataset rows = road_rows(train_set, road_id);
    if (rows.empty()) {
        throw InsufficientDataError("grid_search: no rows for road " + road_id);
    }
    // Days 1-6 of the training week fit the model; day 7 validates it.
    const std::int64_t boundary = rows.front().timestamp + 6 * kSecondsPerDay;
    Dataset fit_rows, val_rows;
    for (const auto& obs : rows) {
        (obs.timestamp < boundary ? fit_rows : val_rows).push_back(obs);
    }
    if (fit_rows.size() < 100 || val_rows.empty()) {
        throw InsufficientDataError("grid_search: training week too short to split");
    }

    double best_rmse = std::numeric_limits<double>::infinity();
    const SvrHyperparams* best = nullptr;
    std::string last_error;
    for (const auto& hp : grid) {
        try {
            const SvrModel model = train_road_model(fit_rows, road_id, hp, seed);
            const ForecastSeries forecast = forecast_week(model, val_rows);
            EvaluationSeries series;
            for (const auto& p : forecast.points) {
                series.actual.push_back(p.actual);
                series.predicted.push_back(p.predicted);
            }
            const double value = rmse(series);
            if (value < best_rmse) {  // strict: ties keep the earliest grid point
                best_rmse = value;
                best = &hp;
            }
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    if (best == nullptr) {
        throw SearchFailedError("grid_search: every grid point failed for road " +
                                road_id + "; last error: " + last_error);
    }
    return *best;
}

}  // namespace jamcast
