#include "jamcast/csvio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jamcast/errors.hpp"
#include "jamcast/numio.hpp"

namespace jamcast {

namespace {

void write_row(std::ostream& out, const TrafficObservation& obs) {
    out << obs.timestamp << ',' << obs.road_id << ','
        << format_double(obs.temperature_c) << ',' << (obs.daylight ? '1' : '0') << ','
        << format_double(obs.humidity_pct) << ',' << format_double(obs.wind_speed_kmh)
        << ',' << format_double(obs.speed_ratio) << ',' << format_double(obs.jam_factor)
        << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

TrafficObservation parse_row(const std::string& line, int line_no, const std::string& path) {
    const auto fields = split_csv_line(line);
    if (fields.size() != 8) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": expected 8 columns, got " +
                         std::to_string(fields.size()));
    }
    try {
        TrafficObservation obs;
        obs.timestamp = parse_int64(fields[0]);
        obs.road_id = fields[1];
        obs.temperature_c = parse_double(fields[2]);
        if (fields[3] == "0") {
            obs.daylight = false;
        } else if (fields[3] == "1") {
            obs.daylight = true;
        } else {
            throw ParseError("daylight must be 0 or 1");
        }
        obs.humidity_pct = parse_double(fields[4]);
        obs.wind_speed_kmh = parse_double(fields[5]);
        obs.speed_ratio = parse_double(fields[6]);
        obs.jam_factor = parse_double(fields[7]);
        validate_observation(obs);
        return obs;
    } catch (const Error& e) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
}

}  // namespace

void save_csv(const std::vector<TrafficObservation>& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open CSV for writing: " + path);
    out << kDatasetCsvHeader << '\n';
    for (const auto& obs : dataset) {
        validate_observation(obs);
        write_row(out, obs);
    }
    if (!out) throw Error("failed writing CSV: " + path);
}

void append_csv(const std::vector<TrafficObservation>& rows, const std::string& path) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open CSV for appending: " + path);
    if (fresh) out << kDatasetCsvHeader << '\n';
    for (const auto& obs : rows) {
        validate_observation(obs);
        write_row(out, obs);
    }
    if (!out) throw Error("failed appending CSV: " + path);
}

std::vector<TrafficObservation> load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kDatasetCsvHeader) {
        throw ParseError(path + ":1: bad or missing CSV header");
    }
    std::vector<TrafficObservation> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        rows.push_back(parse_row(line, line_no, path));
    }
    return rows;
}

}  // namespace jamcast
