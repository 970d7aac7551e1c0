#include "jamcast/amwr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jamcast/errors.hpp"

namespace jamcast {

void validate_controller(const WindowController& ctrl) {
    if (!(ctrl.training_window_s > 0.0)) {
        throw ValidationError("training_window must be > 0");
    }
    if (!(ctrl.min_prediction_window_s > 0.0) ||
        !(ctrl.min_prediction_window_s <= ctrl.prediction_window_s) ||
        !(ctrl.prediction_window_s <= ctrl.max_prediction_window_s)) {
        throw ValidationError("prediction_window must satisfy min <= window <= max");
    }
    if (!(0.0 < ctrl.low_threshold && ctrl.low_threshold < ctrl.high_threshold &&
          ctrl.high_threshold < 1.0)) {
        throw ValidationError("thresholds must satisfy 0 < low < high < 1");
    }
    if (!(ctrl.growth_factor > 1.0)) {
        throw ValidationError("growth_factor must be > 1");
    }
}

Periodogram lomb_scargle(std::span<const double> times, std::span<const double> values,
                         std::span<const double> frequencies) {
    const std::size_t n = times.size();
    if (values.size() != n) throw ShapeError("lomb_scargle: times/values length mismatch");
    if (n < 4) throw ShapeError("lomb_scargle: need at least 4 samples");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ValidationError("lomb_scargle: times must be strictly increasing");
        }
    }
    for (double f : frequencies) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw ValidationError("lomb_scargle: frequencies must be positive");
        }
    }

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);  // sample variance

    Periodogram pg;
    pg.frequencies.assign(frequencies.begin(), frequencies.end());
    pg.powers.assign(frequencies.size(), 0.0);
    if (var <= 1e-20 * (1.0 + mean * mean)) {
        return pg;  // constant signal: nothing to fit
    }

    for (std::size_t fi = 0; fi < frequencies.size(); ++fi) {
        const double omega = 2.0 * std::numbers::pi * frequencies[fi];
        double s2 = 0.0, c2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s2 += std::sin(2.0 * omega * times[i]);
            c2 += std::cos(2.0 * omega * times[i]);
        }
        const double tau = std::atan2(s2, c2) / (2.0 * omega);
        double yc = 0.0, ys = 0.0, cc = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = omega * (times[i] - tau);
            const double c = std::cos(arg);
            const double s = std::sin(arg);
            const double dy = values[i] - mean;
            yc += dy * c;
            ys += dy * s;
            cc += c * c;
            ss += s * s;
        }
        double p = 0.0;
        if (cc > 1e-12) p += yc * yc / cc;
        if (ss > 1e-12) p += ys * ys / ss;
        pg.powers[fi] = p / (2.0 * var);
    }
    return pg;
}

std::vector<double> default_frequency_grid(std::span<const double> times) {
    if (times.size() < 4) throw ShapeError("frequency grid: need at least 4 samples");
    const double span = times.back() - times.front();
    if (!(span > 0.0)) throw ValidationError("frequency grid: zero time span");
    std::vector<double> dts(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) dts[i] = times[i + 1] - times[i];
    std::nth_element(dts.begin(), dts.begin() + dts.size() / 2, dts.end());
    const double median_dt = dts[dts.size() / 2];
    const double f_lo = 1.0 / span;
    const double f_hi = 1.0 / (2.0 * median_dt);
    if (!(f_hi > f_lo)) {
        throw ValidationError("frequency grid: span too short for the sampling interval");
    }
    constexpr int kPoints = 1000;
    std::vector<double> grid(kPoints);
    const double log_lo = std::log(f_lo);
    const double step = (std::log(f_hi) - log_lo) / (kPoints - 1);
    for (int k = 0; k < kPoints; ++k) grid[k] = std::exp(log_lo + step * k);
    return grid;
}

double dominant_period(const Periodogram& pg) {
    if (pg.frequencies.empty() || pg.frequencies.size() != pg.powers.size()) {
        throw ShapeError("dominant_period: empty or inconsistent periodogram");
    }
    double best_power = 0.0;
    std::size_t best = pg.frequencies.size();
    for (std::size_t i = 0; i < pg.powers.size(); ++i) {
        // Strict > keeps the lowest frequency (longest period) on ties.
        if (pg.powers[i] > best_power) {
            best_power = pg.powers[i];
            best = i;
        }
    }
    if (best == pg.frequencies.size()) {
        throw NoDominantPeriodError("dominant_period: all powers are zero");
    }
    return 1.0 / pg.frequencies[best];
}

WindowController adapt_prediction_window(const WindowController& ctrl, double accuracy) {
    validate_controller(ctrl);
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
        throw DomainError("accuracy must be in [0, 1]");
    }
    WindowController out = ctrl;
    if (accuracy > ctrl.high_threshold) {
        out.prediction_window_s =
            std::min(ctrl.prediction_window_s * ctrl.growth_factor,
                     ctrl.max_prediction_window_s);
    } else if (accuracy < ctrl.low_threshold) {
        out.prediction_window_s =
            std::max(ctrl.prediction_window_s / ctrl.growth_factor,
                     ctrl.min_prediction_window_s);
    }
    return out;
}

double accuracy_score(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size() || actual.empty()) {
        throw ShapeError("accuracy_score: equal nonzero lengths required");
    }
    double mae = 0.0, mean_abs = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        mae += std::abs(actual[i] - predicted[i]);
        mean_abs += std::abs(actual[i]);
    }
    mae /= static_cast<double>(actual.size());
    mean_abs /= static_cast<double>(actual.size());
    const double denom = std::max(mean_abs, 1.0);
    return std::clamp(1.0 - mae / denom, 0.0, 1.0);
}

std::vector<AmwrPoint> run_amwr(const std::vector<TrafficObservation>& series,
                                const WindowController& ctrl, const SvrHyperparams& hp,
                                std::uint64_t seed) {
    validate_controller(ctrl);
    validate_hyperparams(hp);
    if (series.size() < 4) {
        throw InsufficientDataError("run_amwr: series too short");
    }
    std::vector<double> times(series.size()), jams(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0 && !(series[i].timestamp > series[i - 1].timestamp)) {
            throw ValidationError("run_amwr: series timestamps must be strictly increasing");
        }
        times[i] = static_cast<double>(series[i].timestamp);
        jams[i] = series[i].jam_factor;
    }

    WindowController state = ctrl;
    try {
        state.training_window_s =
            dominant_period(lomb_scargle(times, jams, default_frequency_grid(times)));
    } catch (const NoDominantPeriodError&) {
        state.training_window_s = 86400.0;  // daily periodicity as physical default
    }

    const double t0 = times.front();
    const double t_end = times.back();
    if (t_end - t0 < state.training_window_s + state.prediction_window_s) {
        throw InsufficientDataError(
            "run_amwr: series shorter than training window + prediction window");
    }

    // Encode once; windows re-fit the scaler on their own slice.
    std::vector<EncodedSample> encoded(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) encoded[i] = encode_observation(series[i]);

    std::vector<AmwrPoint> out;
    double span_start = t0 + state.training_window_s;
    while (span_start <= t_end) {
        const double span_len = state.prediction_window_s;
        const auto lo_train = std::lower_bound(times.begin(), times.end(),
                                               span_start - state.training_window_s);
        const auto lo_test = std::lower_bound(times.begin(), times.end(), span_start);
        const auto hi_test = std::lower_bound(times.begin(), times.end(), span_start + span_len);
        const std::size_t a = static_cast<std::size_t>(lo_train - times.begin());
        const std::size_t b = static_cast<std::size_t>(lo_test - times.begin());
        const std::size_t c = static_cast<std::size_t>(hi_test - times.begin());
        if (c > b && b - a >= 2) {
            std::vector<EncodedSample> train(encoded.begin() + a, encoded.begin() + b);
            const ScalerParams scaler = fit_scaler(train);
            for (auto& s : train) s = apply_scaler(scaler, s);
            SvrModel model;
            try {
                model = train_svr(train, hp, seed);
            } catch (const ConvergenceError&) {
                // One retry with a looser tolerance before giving up on the run.
                SvrHyperparams relaxed = hp;
                relaxed.tol = hp.tol * 10.0;
                model = train_svr(train, relaxed, seed);
            }
            std::vector<double> actual, predicted;
            actual.reserve(c - b);
            predicted.reserve(c - b);
            for (std::size_t k = b; k < c; ++k) {
                const double raw = predict(model, scale_features(scaler, encoded[k].features));
                const double clipped = std::clamp(raw, 0.0, 10.0);
                out.push_back({series[k].timestamp, clipped, series[k].jam_factor});
                actual.push_back(series[k].jam_factor);
                predicted.push_back(clipped);
            }
            state = adapt_prediction_window(state, accuracy_score(actual, predicted));
        }
        span_start += span_len;
    }
    return out;
}

}  // namespace jamcast
