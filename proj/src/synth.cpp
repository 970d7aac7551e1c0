#include "jamcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "jamcast/detrng.hpp"
#include "jamcast/errors.hpp"
#include "jamcast/kvconfig.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/timeutil.hpp"

namespace jamcast {

namespace {

// Counter-based streams keyed on the raw timestamp keep every slot
// independently addressable, so the mock providers can reproduce any single
// poll without replaying history.
constexpr std::uint64_t kSaltWeather = 0x57454154ULL;
constexpr std::uint64_t kSaltJam = 0x4A414D21ULL;

double hour_of_day(std::int64_t timestamp) {
    return static_cast<double>(seconds_since_midnight(timestamp)) / 3600.0;
}

double rush_bump(double hour, double peak_hour) {
    constexpr double kWidthHours = 1.5;
    const double d = hour - peak_hour;
    return std::exp(-d * d / (2.0 * kWidthHours * kWidthHours));
}

}  // namespace

void validate_synth_config(const SynthConfig& config) {
    if (config.roads <= 0 || config.days <= 0) {
        throw ValidationError("synth config: roads and days must be positive");
    }
    if (config.start_timestamp <= 0) {
        throw ValidationError("synth config: start_timestamp must be positive");
    }
    if (config.morning_peak_hour < 0.0 || config.morning_peak_hour >= 24.0 ||
        config.evening_peak_hour < 0.0 || config.evening_peak_hour >= 24.0) {
        throw ValidationError("synth config: peak hours must be in [0, 24)");
    }
    if (config.weekday_amplitude < 0.0 || config.weekend_amplitude < 0.0 ||
        config.rain_jam_boost < 0.0 || config.noise_std < 0.0) {
        throw ValidationError(
            "synth config: amplitudes, rain_jam_boost and noise_std must be >= 0");
    }
    if (config.rain_probability < 0.0 || config.rain_probability > 1.0) {
        throw ValidationError("synth config: rain_probability must be in [0, 1]");
    }
}

SynthConfig load_synth_config(const std::string& path) {
    SynthConfig config;
    for (const auto& [key, value] : parse_kv_file(path)) {
        try {
            if (key == "seed") {
                config.seed = static_cast<std::uint64_t>(parse_int64(value));
            } else if (key == "roads") {
                config.roads = static_cast<int>(parse_int64(value));
            } else if (key == "days") {
                config.days = static_cast<int>(parse_int64(value));
            } else if (key == "start_date") {
                config.start_timestamp = parse_iso_date(value);
            } else if (key == "morning_peak_hour") {
                config.morning_peak_hour = parse_double(value);
            } else if (key == "evening_peak_hour") {
                config.evening_peak_hour = parse_double(value);
            } else if (key == "weekday_amplitude") {
                config.weekday_amplitude = parse_double(value);
            } else if (key == "weekend_amplitude") {
                config.weekend_amplitude = parse_double(value);
            } else if (key == "rain_probability") {
                config.rain_probability = parse_double(value);
            } else if (key == "rain_jam_boost") {
                config.rain_jam_boost = parse_double(value);
            } else if (key == "noise_std") {
                config.noise_std = parse_double(value);
            } else {
                throw ConfigError(path + ": unknown synth config key '" + key + "'");
            }
        } catch (const ParseError& e) {
            throw ConfigError(path + ": bad value for '" + key + "': " + e.what());
        }
    }
    try {
        validate_synth_config(config);
    } catch (const ValidationError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config;
}

std::string synth_road_id(int road_index) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "road_%02d", road_index + 1);
    return buf;
}

SynthWeather synth_weather(const SynthConfig& config, std::int64_t timestamp) {
    DetStream rng = make_stream(config.seed, 0, static_cast<std::uint64_t>(timestamp),
                             kSaltWeather);
    const double h = hour_of_day(timestamp);
    SynthWeather w;
    w.raining = rng.uniform() < config.rain_probability;
    // Diurnal sinusoid: 32 C at 16:00 down to 18 C at 04:00.
    w.temperature_c = 25.0 + 7.0 * std::cos(2.0 * std::numbers::pi * (h - 16.0) / 24.0);
    w.humidity_pct = std::clamp(55.0 + (w.raining ? 25.0 : 0.0) + 5.0 * rng.gaussian(),
                                0.0, 100.0);
    w.wind_speed_kmh = 20.0 * rng.uniform();
    w.daylight = h >= 6.0 && h < 18.0;
    return w;
}

double synth_jam(const SynthConfig& config, int road_index, std::int64_t timestamp) {
    const SynthWeather w = synth_weather(config, timestamp);
    const double h = hour_of_day(timestamp);
    const bool weekend = day_of_week(timestamp) >= 5;
    const double amplitude = weekend ? config.weekend_amplitude : config.weekday_amplitude;
    const double base = amplitude * (rush_bump(h, config.morning_peak_hour) +
                                     rush_bump(h, config.evening_peak_hour));
    DetStream rng = make_stream(config.seed, static_cast<std::uint64_t>(road_index) + 1,
                             static_cast<std::uint64_t>(timestamp), kSaltJam);
    const double noise = config.noise_std * rng.gaussian();
    return std::clamp(base + (w.raining ? config.rain_jam_boost : 0.0) + noise, 0.0, 10.0);
}

TrafficObservation synth_observation(const SynthConfig& config, int road_index,
                                     std::int64_t timestamp) {
    const SynthWeather w = synth_weather(config, timestamp);
    TrafficObservation obs;
    obs.timestamp = timestamp;
    obs.road_id = synth_road_id(road_index);
    obs.temperature_c = w.temperature_c;
    obs.daylight = w.daylight;
    obs.humidity_pct = w.humidity_pct;
    obs.wind_speed_kmh = w.wind_speed_kmh;
    obs.jam_factor = synth_jam(config, road_index, timestamp);
    obs.speed_ratio = std::clamp(1.0 - obs.jam_factor / 10.0, 0.05, 1.0);
    return obs;
}

std::vector<TrafficObservation> synth_generate(const SynthConfig& config) {
    validate_synth_config(config);
    constexpr int kSlotsPerDay = 288;
    std::vector<TrafficObservation> rows;
    rows.reserve(static_cast<std::size_t>(config.roads) * config.days * kSlotsPerDay);
    for (int day = 0; day < config.days; ++day) {
        for (int slot = 0; slot < kSlotsPerDay; ++slot) {
            const std::int64_t ts =
                config.start_timestamp + day * kSecondsPerDay + slot * kSlotSeconds;
            for (int road = 0; road < config.roads; ++road) {
                rows.push_back(synth_observation(config, road, ts));
            }
        }
    }
    return rows;
}

}  // namespace jamcast
