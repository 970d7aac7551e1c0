#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jamcast/featureset.hpp"
#include "jamcast/synth.hpp"

namespace jamcast {

struct BoundingBox {
    double lat_a = 0.0, lon_a = 0.0;
    double lat_b = 0.0, lon_b = 0.0;
};

void validate_bounding_box(const BoundingBox& bbox);

// Parsed provider payload records.
struct RoadTrafficRecord {
    std::string road_id;
    double jam_factor = 0.0;
    double current_speed = 0.0;
    double freeflow_speed = 0.0;
};

struct WeatherRecord {
    double temperature_c = 0.0;
    double humidity_pct = 0.0;
    double wind_speed_kmh = 0.0;
    bool daylight = false;
};

// Abstract providers return raw JSON payloads. Failures surface as
// IngestionError; the collection loop skips the cycle and moves on.
class TrafficClient {
public:
    virtual ~TrafficClient() = default;
    virtual std::string fetch(const BoundingBox& bbox, std::int64_t at) = 0;
};

class WeatherClient {
public:
    virtual ~WeatherClient() = default;
    virtual std::string fetch(const BoundingBox& bbox, std::int64_t at) = 0;
};

// Documented payload schemas:
//   traffic: {"roads":[{"road_id":str,"jam_factor":num,"current_speed":num,
//                        "freeflow_speed":num}, ...]}
//   weather: {"temperature_c":num,"humidity_pct":num,"wind_speed_kmh":num,
//             "daylight":bool}
// Violations raise ParseError naming the JSON path.
std::vector<RoadTrafficRecord> parse_traffic_payload(std::string_view raw);
WeatherRecord parse_weather_payload(std::string_view raw);

// One observation per road in the traffic payload, joined with the single
// weather payload; speed_ratio = current_speed / freeflow_speed.
std::vector<TrafficObservation> poll_cycle(TrafficClient& traffic, WeatherClient& weather,
                                           const BoundingBox& bbox, std::int64_t at);

// Mock transports replay the synthetic model, so a mock collection run
// reproduces synth_generate output for the same seed.
class MockTrafficClient : public TrafficClient {
public:
    explicit MockTrafficClient(SynthConfig config) : config_(std::move(config)) {}
    std::string fetch(const BoundingBox& bbox, std::int64_t at) override;

private:
    SynthConfig config_;
};

class MockWeatherClient : public WeatherClient {
public:
    explicit MockWeatherClient(SynthConfig config) : config_(std::move(config)) {}
    std::string fetch(const BoundingBox& bbox, std::int64_t at) override;

private:
    SynthConfig config_;
};

// Optional HTTP adapter (off the test path): GET `endpoint`, appending the
// key from `api_key_env` when that environment variable is set.
class HttpJsonTrafficClient : public TrafficClient {
public:
    HttpJsonTrafficClient(std::string endpoint, std::string api_key_env)
        : endpoint_(std::move(endpoint)), api_key_env_(std::move(api_key_env)) {}
    std::string fetch(const BoundingBox& bbox, std::int64_t at) override;

private:
    std::string endpoint_;
    std::string api_key_env_;
};

class HttpJsonWeatherClient : public WeatherClient {
public:
    HttpJsonWeatherClient(std::string endpoint, std::string api_key_env)
        : endpoint_(std::move(endpoint)), api_key_env_(std::move(api_key_env)) {}
    std::string fetch(const BoundingBox& bbox, std::int64_t at) override;

private:
    std::string endpoint_;
    std::string api_key_env_;
};

// Collector config file (key=value): bbox corners, poll interval, provider
// endpoints and the name of the env var holding the API key.
struct CollectorConfig {
    BoundingBox bbox{28.747193, 77.091064, 28.495247, 77.304611};
    int poll_interval_s = 300;
    std::string traffic_endpoint;
    std::string weather_endpoint;
    std::string api_key_env = "JAMCAST_API_KEY";
};

CollectorConfig load_collector_config(const std::string& path);

// Clock abstraction so mock collections run instantly.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now() = 0;
    virtual void sleep_until(std::int64_t t) = 0;
};

class SystemClock : public Clock {
public:
    std::int64_t now() override;
    void sleep_until(std::int64_t t) override;
};

class SimulatedClock : public Clock {
public:
    explicit SimulatedClock(std::int64_t start) : now_(start) {}
    std::int64_t now() override { return now_; }
    void sleep_until(std::int64_t t) override { now_ = std::max(now_, t); }

private:
    std::int64_t now_;
};

struct CollectStats {
    int cycles_attempted = 0;
    int cycles_ok = 0;
    int cycles_skipped = 0;
    std::int64_t rows_appended = 0;
};

// Polls every `interval_s` for `duration_s`, appending each cycle to the CSV
// at `out_path`. Provider errors skip the cycle (logged to stderr).
CollectStats run_collection(TrafficClient& traffic, WeatherClient& weather,
                            const BoundingBox& bbox, Clock& clock,
                            std::int64_t duration_s, int interval_s,
                            const std::string& out_path);

}  // namespace jamcast
