#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace jamcast {

// Fixed feature layout. Order is a compatibility contract: model files record
// the tag and refuse inputs with a different layout.
inline constexpr int kFeatureDim = 9;
inline constexpr const char* kFeatureLayoutTag =
    "tod_sin,tod_cos,dow_sin,dow_cos,temperature_c,daylight,humidity_pct,"
    "wind_speed_kmh,speed_ratio";

// One timestamped per-road record joining traffic state and weather.
struct TrafficObservation {
    std::int64_t timestamp = 0;  // UTC seconds since epoch, > 0
    std::string road_id;         // opaque segment identifier
    double temperature_c = 0.0;
    bool daylight = false;
    double humidity_pct = 0.0;   // [0, 100]
    double wind_speed_kmh = 0.0; // >= 0
    double speed_ratio = 0.0;    // current / free-flow speed, >= 0
    double jam_factor = 0.0;     // [0, 10]; response variable
};

// Throws ValidationError naming the offending field.
void validate_observation(const TrafficObservation& obs);

// Numeric feature vector plus jam-factor target, ready for regression.
struct EncodedSample {
    std::vector<double> features;
    double target = 0.0;
};

// Per-feature standardization parameters. scale > 0 everywhere; features with
// (near) zero variance keep scale 1 so constants pass through centered.
struct ScalerParams {
    std::vector<double> mean;
    std::vector<double> scale;
};

// Cyclic encodings. Both return (sin, cos) of the phase, so midnight/Monday
// map to (0, 1) and the pair always lies on the unit circle.
std::pair<double, double> encode_time_of_day(int seconds_since_midnight);
std::pair<double, double> encode_day_of_week(int day_index);  // Monday = 0

// Layout: [tod_sin, tod_cos, dow_sin, dow_cos, temperature_c, daylight,
//          humidity_pct, wind_speed_kmh, speed_ratio]; target = jam_factor.
// Road identity is intentionally not a feature: one model per road.
EncodedSample encode_observation(const TrafficObservation& obs);

// Mean / population standard deviation per feature. Needs >= 2 samples.
ScalerParams fit_scaler(const std::vector<EncodedSample>& samples);

// (x - mean) / scale per feature; target untouched.
EncodedSample apply_scaler(const ScalerParams& params, const EncodedSample& sample);
std::vector<double> scale_features(const ScalerParams& params,
                                   const std::vector<double>& features);

// Inverse of apply_scaler: x * scale + mean.
EncodedSample invert_scaler(const ScalerParams& params, const EncodedSample& sample);

// Identity scaler of the given dimension.
ScalerParams identity_scaler(int dim);

}  // namespace jamcast
