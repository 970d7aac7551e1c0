#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jamcast/featureset.hpp"
#include "jamcast/svr.hpp"

namespace jamcast {

// Normalized periodogram over a fixed frequency grid (cycles per second).
struct Periodogram {
    std::vector<double> frequencies;  // strictly increasing
    std::vector<double> powers;       // non-negative
};

// Adaptive-window state. Only the prediction window adapts at run time; the
// training window is sized once from the spectral peak of the series.
struct WindowController {
    double training_window_s = 86400.0;
    double prediction_window_s = 900.0;
    double low_threshold = 0.80;
    double high_threshold = 0.95;
    double min_prediction_window_s = 900.0;    // 15 minutes
    double max_prediction_window_s = 86400.0;  // 24 hours
    double growth_factor = 2.0;
};

void validate_controller(const WindowController& ctrl);

// Tau-shifted least-squares periodogram, normalized by 2x the sample variance.
// Invariant under adding a constant to the values; a constant series yields
// all-zero powers. Times must be strictly increasing with length >= 4.
Periodogram lomb_scargle(std::span<const double> times, std::span<const double> values,
                         std::span<const double> frequencies);

// Default grid: 1/(total span) up to 1/(2 x median sampling interval),
// 1000 log-spaced points.
std::vector<double> default_frequency_grid(std::span<const double> times);

// 1 / argmax-frequency; ties break toward the lower frequency (longer period).
// Throws NoDominantPeriodError when every power is zero.
double dominant_period(const Periodogram& pg);

// Three-way branch with strict thresholds: grow above high, shrink below low,
// hold otherwise. Pure; returns the updated controller.
WindowController adapt_prediction_window(const WindowController& ctrl, double accuracy);

// max(0, 1 - MAE / max(mean|actual|, 1)) clamped to [0, 1].
double accuracy_score(std::span<const double> actual, std::span<const double> predicted);

struct AmwrPoint {
    std::int64_t timestamp = 0;
    double predicted = 0.0;  // clipped to [0, 10]
    double actual = 0.0;
};

// Rolling baseline: size the training window from the dominant period of the
// jam series (fallback 24 h), then repeatedly train an SVR on the trailing
// window, forecast the next prediction window, score it and adapt.
std::vector<AmwrPoint> run_amwr(const std::vector<TrafficObservation>& series,
                                const WindowController& ctrl, const SvrHyperparams& hp,
                                std::uint64_t seed);

}  // namespace jamcast
