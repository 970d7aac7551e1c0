#include "jamcast/ingestion.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "jamcast/errors.hpp"
#include "jamcast/kvconfig.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/csvio.hpp"

namespace jamcast {

using nlohmann::json;

void validate_bounding_box(const BoundingBox& bbox) {
    const auto lat_ok = [](double lat) { return lat >= -90.0 && lat <= 90.0; };
    const auto lon_ok = [](double lon) { return lon >= -180.0 && lon <= 180.0; };
    if (!lat_ok(bbox.lat_a) || !lat_ok(bbox.lat_b)) {
        throw ValidationError("bounding box: latitude must be in [-90, 90]");
    }
    if (!lon_ok(bbox.lon_a) || !lon_ok(bbox.lon_b)) {
        throw ValidationError("bounding box: longitude must be in [-180, 180]");
    }
    if (bbox.lat_a == bbox.lat_b && bbox.lon_a == bbox.lon_b) {
        throw ValidationError("bounding box: corners must be distinct");
    }
}

namespace {

json parse_json_or_throw(std::string_view raw, const char* what) {
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError(std::string(what) + ": payload is not valid JSON");
    }
    return doc;
}

double require_number(const json& node, const std::string& path) {
    if (!node.is_number()) throw ParseError("payload field " + path + " must be a number");
    return node.get<double>();
}

}  // namespace

std::vector<RoadTrafficRecord> parse_traffic_payload(std::string_view raw) {
    const json doc = parse_json_or_throw(raw, "traffic payload");
    if (!doc.is_object() || !doc.contains("roads") || !doc["roads"].is_array()) {
        throw ParseError("payload field roads must be an array");
    }
    std::vector<RoadTrafficRecord> records;
    std::size_t i = 0;
    for (const auto& node : doc["roads"]) {
        const std::string at = "roads[" + std::to_string(i) + "]";
        if (!node.is_object()) throw ParseError("payload field " + at + " must be an object");
        RoadTrafficRecord rec;
        if (!node.contains("road_id") || !node["road_id"].is_string() ||
            node["road_id"].get<std::string>().empty()) {
            throw ParseError("payload field " + at + ".road_id must be a non-empty string");
        }
        rec.road_id = node["road_id"].get<std::string>();
        for (const auto& prev : records) {
            if (prev.road_id == rec.road_id) {
                throw ParseError("payload field " + at + ".road_id duplicates '" +
                                 rec.road_id + "'");
            }
        }
        if (!node.contains("jam_factor")) {
            throw ParseError("payload field " + at + ".jam_factor is missing");
        }
        rec.jam_factor = require_number(node["jam_factor"], at + ".jam_factor");
        if (rec.jam_factor < 0.0 || rec.jam_factor > 10.0) {
            throw ParseError("payload field " + at + ".jam_factor must be in [0, 10]");
        }
        if (!node.contains("current_speed")) {
            throw ParseError("payload field " + at + ".current_speed is missing");
        }
        rec.current_speed = require_number(node["current_speed"], at + ".current_speed");
        if (rec.current_speed < 0.0) {
            throw ParseError("payload field " + at + ".current_speed must be >= 0");
        }
        if (!node.contains("freeflow_speed")) {
            throw ParseError("payload field " + at + ".freeflow_speed is missing");
        }
        rec.freeflow_speed = require_number(node["freeflow_speed"], at + ".freeflow_speed");
        if (!(rec.freeflow_speed > 0.0)) {
            throw ParseError("payload field " + at + ".freeflow_speed must be > 0");
        }
        records.push_back(std::move(rec));
        ++i;
    }
    return records;
}

WeatherRecord parse_weather_payload(std::string_view raw) {
    const json doc = parse_json_or_throw(raw, "weather payload");
    if (!doc.is_object()) throw ParseError("weather payload must be a JSON object");
    WeatherRecord rec;
    if (!doc.contains("temperature_c")) {
        throw ParseError("payload field temperature_c is missing");
    }
    rec.temperature_c = require_number(doc["temperature_c"], "temperature_c");
    if (!doc.contains("humidity_pct")) {
        throw ParseError("payload field humidity_pct is missing");
    }
    rec.humidity_pct = require_number(doc["humidity_pct"], "humidity_pct");
    if (rec.humidity_pct < 0.0 || rec.humidity_pct > 100.0) {
        throw ParseError("payload field humidity_pct must be in [0, 100]");
    }
    if (!doc.contains("wind_speed_kmh")) {
        throw ParseError("payload field wind_speed_kmh is missing");
    }
    rec.wind_speed_kmh = require_number(doc["wind_speed_kmh"], "wind_speed_kmh");
    if (rec.wind_speed_kmh < 0.0) {
        throw ParseError("payload field wind_speed_kmh must be >= 0");
    }
    if (!doc.contains("daylight") || !doc["daylight"].is_boolean()) {
        throw ParseError("payload field daylight must be a boolean");
    }
    rec.daylight = doc["daylight"].get<bool>();
    return rec;
}

std::vector<TrafficObservation> poll_cycle(TrafficClient& traffic, WeatherClient& weather,
                                           const BoundingBox& bbox, std::int64_t at) {
    validate_bounding_box(bbox);
    if (at <= 0) throw DomainError("poll_cycle: timestamp must be positive");
    std::string traffic_raw, weather_raw;
    try {
        traffic_raw = traffic.fetch(bbox, at);
        weather_raw = weather.fetch(bbox, at);
    } catch (const IngestionError&) {
        throw;
    } catch (const std::exception& e) {
        throw IngestionError(std::string("provider request failed: ") + e.what());
    }
    const auto roads = parse_traffic_payload(traffic_raw);
    const auto wx = parse_weather_payload(weather_raw);
    std::vector<TrafficObservation> out;
    out.reserve(roads.size());
    for (const auto& rec : roads) {
        TrafficObservation obs;
        obs.timestamp = at;
        obs.road_id = rec.road_id;
        obs.temperature_c = wx.temperature_c;
        obs.daylight = wx.daylight;
        obs.humidity_pct = wx.humidity_pct;
        obs.wind_speed_kmh = wx.wind_speed_kmh;
        obs.speed_ratio = rec.current_speed / rec.freeflow_speed;
        obs.jam_factor = rec.jam_factor;
        validate_observation(obs);
        out.push_back(std::move(obs));
    }
    return out;
}

// Free-flow constant is a power of two, so speed_ratio survives the
// multiply/divide round trip bitwise and mock collections replay
// synth_generate exactly.
namespace {
constexpr double kMockFreeflowKmh = 64.0;
}

std::string MockTrafficClient::fetch(const BoundingBox& bbox, std::int64_t at) {
    validate_bounding_box(bbox);
    json roads = json::array();
    for (int road = 0; road < config_.roads; ++road) {
        const TrafficObservation obs = synth_observation(config_, road, at);
        roads.push_back({{"road_id", obs.road_id},
                         {"jam_factor", obs.jam_factor},
                         {"current_speed", obs.speed_ratio * kMockFreeflowKmh},
                         {"freeflow_speed", kMockFreeflowKmh}});
    }
    return json{{"roads", roads}}.dump();
}

std::string MockWeatherClient::fetch(const BoundingBox& bbox, std::int64_t at) {
    validate_bounding_box(bbox);
    const SynthWeather wx = synth_weather(config_, at);
    return json{{"temperature_c", wx.temperature_c},
                {"humidity_pct", wx.humidity_pct},
                {"wind_speed_kmh", wx.wind_speed_kmh},
                {"daylight", wx.daylight}}
        .dump();
}

namespace {

std::string http_get(const std::string& endpoint, const std::string& api_key_env,
                     const BoundingBox& bbox, std::int64_t at) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must look like http://host[:port]/path: " + endpoint);
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? endpoint : endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
    path += path.find('?') == std::string::npos ? '?' : '&';
    path += "bbox=" + format_double(bbox.lat_a) + ',' + format_double(bbox.lon_a) + ';' +
            format_double(bbox.lat_b) + ',' + format_double(bbox.lon_b) +
            "&t=" + std::to_string(at);
    if (const char* key = std::getenv(api_key_env.c_str()); key != nullptr && *key != '\0') {
        path += std::string("&apiKey=") + key;
    }
    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(10);
    auto res = client.Get(path);
    if (!res) throw IngestionError("request to " + base + " failed: " + to_string(res.error()));
    if (res->status != 200) {
        throw IngestionError("request to " + base + " returned status " +
                             std::to_string(res->status));
    }
    return res->body;
}

}  // namespace

std::string HttpJsonTrafficClient::fetch(const BoundingBox& bbox, std::int64_t at) {
    return http_get(endpoint_, api_key_env_, bbox, at);
}

std::string HttpJsonWeatherClient::fetch(const BoundingBox& bbox, std::int64_t at) {
    return http_get(endpoint_, api_key_env_, bbox, at);
}

CollectorConfig load_collector_config(const std::string& path) {
    CollectorConfig config;
    for (const auto& [key, value] : parse_kv_file(path)) {
        try {
            if (key == "corner_a_lat") {
                config.bbox.lat_a = parse_double(value);
            } else if (key == "corner_a_lon") {
                config.bbox.lon_a = parse_double(value);
            } else if (key == "corner_b_lat") {
                config.bbox.lat_b = parse_double(value);
            } else if (key == "corner_b_lon") {
                config.bbox.lon_b = parse_double(value);
            } else if (key == "poll_interval_s") {
                config.poll_interval_s = static_cast<int>(parse_int64(value));
            } else if (key == "traffic_endpoint") {
                config.traffic_endpoint = value;
            } else if (key == "weather_endpoint") {
                config.weather_endpoint = value;
            } else if (key == "api_key_env") {
                config.api_key_env = value;
            } else {
                throw ConfigError(path + ": unknown collector config key '" + key + "'");
            }
        } catch (const ParseError& e) {
            throw ConfigError(path + ": bad value for '" + key + "': " + e.what());
        }
    }
    if (config.poll_interval_s <= 0) {
        throw ConfigError(path + ": poll_interval_s must be positive");
    }
    try {
        validate_bounding_box(config.bbox);
    } catch (const ValidationError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config;
}

std::int64_t SystemClock::now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

void SystemClock::sleep_until(std::int64_t t) {
    const std::int64_t delta = t - now();
    if (delta > 0) std::this_thread::sleep_for(std::chrono::seconds(delta));
}

CollectStats run_collection(TrafficClient& traffic, WeatherClient& weather,
                            const BoundingBox& bbox, Clock& clock,
                            std::int64_t duration_s, int interval_s,
                            const std::string& out_path) {
    if (interval_s <= 0) throw ValidationError("collection interval must be positive");
    if (duration_s < 0) throw ValidationError("collection duration must be >= 0");
    validate_bounding_box(bbox);
    CollectStats stats;
    const std::int64_t cycles = duration_s / interval_s;
    // Align the first cycle to the interval grid.
    const std::int64_t t0 =
        (clock.now() + interval_s - 1) / interval_s * static_cast<std::int64_t>(interval_s);
    for (std::int64_t k = 0; k < cycles; ++k) {
        const std::int64_t t = t0 + k * interval_s;
        clock.sleep_until(t);
        ++stats.cycles_attempted;
        try {
            const auto rows = poll_cycle(traffic, weather, bbox, t);
            append_csv(rows, out_path);
            ++stats.cycles_ok;
            stats.rows_appended += static_cast<std::int64_t>(rows.size());
        } catch (const IngestionError& e) {
            std::cerr << "cycle at t=" << t << " skipped: " << e.what() << '\n';
            ++stats.cycles_skipped;
        } catch (const ParseError& e) {
            std::cerr << "cycle at t=" << t << " skipped (bad payload): " << e.what() << '\n';
            ++stats.cycles_skipped;
        }
    }
    return stats;
}

}  // namespace jamcast
