#include "jamcast/featureset.hpp"

#include <cmath>
#include <numbers>

#include "jamcast/errors.hpp"
#include "jamcast/timeutil.hpp"

namespace jamcast {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(field) + " must be finite");
    }
}

}  // namespace

void validate_observation(const TrafficObservation& obs) {
    if (obs.timestamp <= 0) {
        throw ValidationError("timestamp must be strictly positive");
    }
    if (obs.road_id.empty()) {
        throw ValidationError("road_id must be non-empty");
    }
    require_finite(obs.temperature_c, "temperature_c");
    require_finite(obs.humidity_pct, "humidity_pct");
    require_finite(obs.wind_speed_kmh, "wind_speed_kmh");
    require_finite(obs.speed_ratio, "speed_ratio");
    require_finite(obs.jam_factor, "jam_factor");
    if (obs.humidity_pct < 0.0 || obs.humidity_pct > 100.0) {
        throw ValidationError("humidity_pct must be in [0, 100]");
    }
    if (obs.wind_speed_kmh < 0.0) {
        throw ValidationError("wind_speed_kmh must be >= 0");
    }
    if (obs.speed_ratio < 0.0) {
        throw ValidationError("speed_ratio must be >= 0");
    }
    if (obs.jam_factor < 0.0 || obs.jam_factor > 10.0) {
        throw ValidationError("jam_factor must be in [0, 10]");
    }
}

std::pair<double, double> encode_time_of_day(int seconds_since_midnight) {
    if (seconds_since_midnight < 0 || seconds_since_midnight >= 86400) {
        throw DomainError("seconds_since_midnight must be in [0, 86400)");
    }
    const double phase = kTwoPi * seconds_since_midnight / 86400.0;
    return {std::sin(phase), std::cos(phase)};
}

std::pair<double, double> encode_day_of_week(int day_index) {
    if (day_index < 0 || day_index > 6) {
        throw DomainError("day_index must be in {0..6} (Monday = 0)");
    }
    const double phase = kTwoPi * day_index / 7.0;
    return {std::sin(phase), std::cos(phase)};
}

EncodedSample encode_observation(const TrafficObservation& obs) {
    validate_observation(obs);
    const auto [tod_sin, tod_cos] =
        encode_time_of_day(seconds_since_midnight(obs.timestamp));
    const auto [dow_sin, dow_cos] = encode_day_of_week(day_of_week(obs.timestamp));
    EncodedSample sample;
    sample.features = {tod_sin,
                       tod_cos,
                       dow_sin,
                       dow_cos,
                       obs.temperature_c,
                       obs.daylight ? 1.0 : 0.0,
                       obs.humidity_pct,
                       obs.wind_speed_kmh,
                       obs.speed_ratio};
    sample.target = obs.jam_factor;
    return sample;
}

ScalerParams fit_scaler(const std::vector<EncodedSample>& samples) {
    if (samples.size() < 2) {
        throw InsufficientDataError("fit_scaler needs at least 2 samples");
    }
    const std::size_t dim = samples.front().features.size();
    for (const auto& s : samples) {
        if (s.features.size() != dim) {
            throw ShapeError("inconsistent feature dimensions in scaler input");
        }
    }
    const double n = static_cast<double>(samples.size());
    ScalerParams params;
    params.mean.assign(dim, 0.0);
    params.scale.assign(dim, 0.0);
    for (const auto& s : samples) {
        for (std::size_t k = 0; k < dim; ++k) params.mean[k] += s.features[k];
    }
    for (std::size_t k = 0; k < dim; ++k) params.mean[k] /= n;
    for (const auto& s : samples) {
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = s.features[k] - params.mean[k];
            params.scale[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < dim; ++k) {
        const double sd = std::sqrt(params.scale[k] / n);  // population stddev
        params.scale[k] = sd < 1e-12 ? 1.0 : sd;
    }
    return params;
}

std::vector<double> scale_features(const ScalerParams& params,
                                   const std::vector<double>& features) {
    if (features.size() != params.mean.size() ||
        params.mean.size() != params.scale.size()) {
        throw ShapeError("feature dimension does not match scaler");
    }
    std::vector<double> out(features.size());
    for (std::size_t k = 0; k < features.size(); ++k) {
        out[k] = (features[k] - params.mean[k]) / params.scale[k];
    }
    return out;
}

EncodedSample apply_scaler(const ScalerParams& params, const EncodedSample& sample) {
    return {scale_features(params, sample.features), sample.target};
}

EncodedSample invert_scaler(const ScalerParams& params, const EncodedSample& sample) {
    if (sample.features.size() != params.mean.size() ||
        params.mean.size() != params.scale.size()) {
        throw ShapeError("feature dimension does not match scaler");
    }
    EncodedSample out;
    out.features.resize(sample.features.size());
    for (std::size_t k = 0; k < sample.features.size(); ++k) {
        out.features[k] = sample.features[k] * params.scale[k] + params.mean[k];
    }
    out.target = sample.target;
    return out;
}

ScalerParams identity_scaler(int dim) {
    ScalerParams params;
    params.mean.assign(static_cast<std::size_t>(dim), 0.0);
    params.scale.assign(static_cast<std::size_t>(dim), 1.0);
    return params;
}

}  // namespace jamcast
