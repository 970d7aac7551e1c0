#pragma once

#include <string>
#include <vector>

#include "jamcast/evaluation.hpp"
#include "jamcast/pipeline.hpp"

namespace jamcast {

// Static actual-vs-predicted line chart for one road's test week.
void write_forecast_svg(const ForecastSeries& series, const std::string& title,
                        const std::string& path);

// Grouped bars: per-road RMSE for the two methods plus the average pair.
void write_comparison_bars_svg(const std::vector<ComparisonRow>& rows,
                               const std::string& proposed_label,
                               const std::string& baseline_label,
                               const std::string& path);

}  // namespace jamcast
