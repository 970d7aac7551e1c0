#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jamcast/featureset.hpp"

namespace jamcast {

// Deterministic synthetic dataset: weekday/weekend rush-hour structure, a
// shared regional rain process that boosts congestion (and humidity, so the
// effect is learnable from the weather features), and per-road noise.
struct SynthConfig {
    std::uint64_t seed = 42;
    int roads = 4;
    int days = 14;
    std::int64_t start_timestamp = 1555286400;  // 2019-04-15 00:00 UTC, a Monday
    double morning_peak_hour = 8.0;
    double evening_peak_hour = 18.0;
    double weekday_amplitude = 6.0;   // jam-factor units at the bump maximum
    double weekend_amplitude = 3.0;
    double rain_probability = 0.08;   // per 5-minute slot
    double rain_jam_boost = 2.5;      // jam-factor units while raining
    double noise_std = 0.5;
};

void validate_synth_config(const SynthConfig& config);

// key=value file (# comments); unknown keys are rejected.
SynthConfig load_synth_config(const std::string& path);

std::string synth_road_id(int road_index);

// Deterministic per-slot pieces, shared with the mock providers so a mock
// collection run reproduces the generated dataset exactly.
struct SynthWeather {
    double temperature_c = 0.0;
    double humidity_pct = 0.0;
    double wind_speed_kmh = 0.0;
    bool daylight = false;
    bool raining = false;
};

SynthWeather synth_weather(const SynthConfig& config, std::int64_t timestamp);
double synth_jam(const SynthConfig& config, int road_index, std::int64_t timestamp);
TrafficObservation synth_observation(const SynthConfig& config, int road_index,
                                     std::int64_t timestamp);

// roads x days x 288 rows, ordered by timestamp then road index.
std::vector<TrafficObservation> synth_generate(const SynthConfig& config);

}  // namespace jamcast
