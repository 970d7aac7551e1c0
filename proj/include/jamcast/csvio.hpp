#pragma once

#include <string>
#include <vector>

#include "jamcast/featureset.hpp"

namespace jamcast {

// Dataset CSV schema (exact header, in order):
//   timestamp,road_id,temperature_c,daylight,humidity_pct,wind_speed_kmh,speed_ratio,jam_factor
// with daylight as 0/1, timestamps as integer epoch seconds and reals as
// shortest round-trip decimals. Observations are validated on both paths.
inline constexpr const char* kDatasetCsvHeader =
    "timestamp,road_id,temperature_c,daylight,humidity_pct,wind_speed_kmh,"
    "speed_ratio,jam_factor";

void save_csv(const std::vector<TrafficObservation>& dataset, const std::string& path);
void append_csv(const std::vector<TrafficObservation>& rows, const std::string& path);
std::vector<TrafficObservation> load_csv(const std::string& path);

}  // namespace jamcast
