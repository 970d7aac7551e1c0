// jamcast command-line tool: synthesize or collect datasets, then run the
// week-ahead congestion experiment end to end.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jamcast/csvio.hpp"
#include "jamcast/errors.hpp"
#include "jamcast/experiment.hpp"
#include "jamcast/ingestion.hpp"
#include "jamcast/kvconfig.hpp"
#include "jamcast/manifest.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/synth.hpp"
#include "jamcast/timeutil.hpp"

namespace fs = std::filesystem;
using namespace jamcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int run_synth(const std::string& config_path, const std::string& out_path,
              std::int64_t seed_override) {
    SynthConfig config =
        config_path.empty() ? SynthConfig{} : load_synth_config(config_path);
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
    const auto rows = synth_generate(config);
    save_csv(rows, out_path);

    RunManifest manifest;
    manifest.command = "synth";
    if (!config_path.empty()) manifest.inputs.push_back(config_path);
    manifest.seed = config.seed;
    manifest.resolved_config["roads"] = std::to_string(config.roads);
    manifest.resolved_config["days"] = std::to_string(config.days);
    manifest.resolved_config["start_date"] = format_iso_date(config.start_timestamp);
    manifest.resolved_config["morning_peak_hour"] = format_double(config.morning_peak_hour);
    manifest.resolved_config["evening_peak_hour"] = format_double(config.evening_peak_hour);
    manifest.resolved_config["weekday_amplitude"] = format_double(config.weekday_amplitude);
    manifest.resolved_config["weekend_amplitude"] = format_double(config.weekend_amplitude);
    manifest.resolved_config["rain_probability"] = format_double(config.rain_probability);
    manifest.resolved_config["rain_jam_boost"] = format_double(config.rain_jam_boost);
    manifest.resolved_config["noise_std"] = format_double(config.noise_std);
    manifest.outputs = {fs::path(out_path).filename().string()};
    write_manifest(manifest, out_path + ".manifest.json");

    std::cout << rows.size() << " rows written to " << out_path << '\n';
    return kExitOk;
}

int run_experiment_cmd(const ExperimentConfig& config) {
    const ExperimentResult result = run_experiment(config);
    std::cout << "roads:";
    for (const auto& road : result.roads) std::cout << ' ' << road;
    std::cout << '\n';
    std::cout << "road_id  rmse_proposed  rmse_amwr\n";
    for (const auto& row : result.comparison) {
        std::cout << row.road_id << "  " << format_fixed(row.proposed, 3) << "  "
                  << format_fixed(row.baseline, 3) << '\n';
    }
    std::cout << "persistence avg rmse: " << format_fixed(result.persistence.average_rmse, 3)
              << "\nglobal_mean avg rmse: " << format_fixed(result.global_mean.average_rmse, 3)
              << '\n';
    std::cout << "outputs in " << config.out_dir << " (see manifest.json)\n";
    return kExitOk;
}

int run_collect(const std::string& config_path, std::int64_t duration_s,
                std::int64_t interval_override, const std::string& out_path,
                bool mock_provider, std::int64_t mock_seed, std::int64_t mock_start) {
    const CollectorConfig config = load_collector_config(config_path);
    const int interval = interval_override > 0 ? static_cast<int>(interval_override)
                                               : config.poll_interval_s;

    CollectStats stats;
    if (mock_provider) {
        SynthConfig synth;
        if (mock_seed >= 0) synth.seed = static_cast<std::uint64_t>(mock_seed);
        MockTrafficClient traffic(synth);
        MockWeatherClient weather(synth);
        SimulatedClock clock(mock_start > 0 ? mock_start : synth.start_timestamp);
        stats = run_collection(traffic, weather, config.bbox, clock, duration_s, interval,
                               out_path);
    } else {
        if (config.traffic_endpoint.empty() || config.weather_endpoint.empty()) {
            throw ConfigError(
                "collector config needs traffic_endpoint and weather_endpoint "
                "(or pass --mock-provider)");
        }
        HttpJsonTrafficClient traffic(config.traffic_endpoint, config.api_key_env);
        HttpJsonWeatherClient weather(config.weather_endpoint, config.api_key_env);
        SystemClock clock;
        stats = run_collection(traffic, weather, config.bbox, clock, duration_s, interval,
                               out_path);
    }

    RunManifest manifest;
    manifest.command = "collect";
    manifest.inputs = {config_path};
    manifest.seed = mock_provider && mock_seed >= 0 ? static_cast<std::uint64_t>(mock_seed) : 0;
    manifest.resolved_config["interval_s"] = std::to_string(interval);
    manifest.resolved_config["duration_s"] = std::to_string(duration_s);
    manifest.resolved_config["mock_provider"] = mock_provider ? "true" : "false";
    manifest.outputs = {fs::path(out_path).filename().string()};
    write_manifest(manifest, out_path + ".manifest.json");

    std::cout << stats.cycles_ok << " cycles ok, " << stats.cycles_skipped << " skipped, "
              << stats.rows_appended << " rows appended to " << out_path << '\n';
    if (stats.cycles_attempted > 0 && stats.cycles_ok == 0) {
        std::cerr << "error: every poll cycle failed\n";
        return kExitData;
    }
    return kExitOk;
}

std::vector<SvrHyperparams> load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file: " + path);
    std::vector<SvrHyperparams> grid;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream tokens(line);
        std::string token;
        SvrHyperparams hp;  // unspecified fields keep the defaults
        bool any = false;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(path + ":" + std::to_string(line_no) +
                                  ": expected key=value tokens");
            }
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            try {
                if (key == "C") {
                    hp.C = parse_double(value);
                } else if (key == "epsilon") {
                    hp.epsilon = parse_double(value);
                } else if (key == "gamma") {
                    hp.gamma = parse_double(value);
                } else if (key == "tol") {
                    hp.tol = parse_double(value);
                } else if (key == "max_passes") {
                    hp.max_passes = static_cast<int>(parse_int64(value));
                } else {
                    throw ConfigError(path + ":" + std::to_string(line_no) +
                                      ": unknown grid key '" + key + "'");
                }
            } catch (const ParseError& e) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
            any = true;
        }
        if (!any) continue;
        try {
            validate_hyperparams(hp);
        } catch (const ValidationError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        grid.push_back(hp);
    }
    return grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jamcast: week-ahead road congestion forecasting"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic dataset");
    std::string synth_config, synth_out = "dataset.csv";
    std::int64_t synth_seed = -1;
    synth->add_option("--config", synth_config, "synth config file (key = value)");
    synth->add_option("--out", synth_out, "output CSV path");
    synth->add_option("--seed", synth_seed, "override the config seed");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "train, forecast and evaluate");
    ExperimentConfig exp;
    std::string train_start = "2019-04-15", train_end = "2019-04-21";
    std::string test_start = "2019-04-22", test_end = "2019-04-28";
    std::string roads_csv, grid_path;
    int random_roads = 0;
    std::int64_t exp_seed = 0;
    experiment->add_option("--data", exp.dataset_path, "dataset CSV")->required();
    experiment->add_option("--out", exp.out_dir, "output directory")->required();
    experiment->add_option("--train-start", train_start, "first day of the training week");
    experiment->add_option("--train-end", train_end, "last day of the training week");
    experiment->add_option("--test-start", test_start, "first day of the test week");
    experiment->add_option("--test-end", test_end, "last day of the test week");
    experiment->add_option("--roads", roads_csv, "comma-separated road ids");
    experiment->add_option("--random", random_roads, "pick N roads at random (seeded)");
    experiment->add_option("--seed", exp_seed, "run seed");
    experiment->add_option("--grid", grid_path, "hyperparameter grid file");

    // collect
    auto* collect = app.add_subcommand("collect", "poll providers and append to a CSV");
    std::string collect_config, collect_out = "collected.csv";
    std::int64_t duration_s = 0, interval_override = -1, mock_seed = -1, mock_start = -1;
    bool mock_provider = false;
    collect->add_option("--config", collect_config, "collector config file")->required();
    collect->add_option("--out", collect_out, "CSV to append to");
    collect->add_option("--duration-s", duration_s, "how long to collect, seconds")
        ->required();
    collect->add_option("--interval-s", interval_override, "override the poll interval");
    collect->add_flag("--mock-provider", mock_provider, "use the deterministic mock transport");
    collect->add_option("--mock-seed", mock_seed, "seed for the mock transport");
    collect->add_option("--mock-start", mock_start, "simulated clock start (epoch seconds)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (synth->parsed()) {
            return run_synth(synth_config, synth_out, synth_seed);
        }
        if (experiment->parsed()) {
            exp.split.train_start = parse_iso_date(train_start);
            exp.split.train_end = parse_iso_date(train_end);
            exp.split.test_start = parse_iso_date(test_start);
            exp.split.test_end = parse_iso_date(test_end);
            exp.seed = static_cast<std::uint64_t>(exp_seed);
            exp.random_roads = random_roads;
            if (!roads_csv.empty()) {
                std::istringstream in(roads_csv);
                std::string road;
                while (std::getline(in, road, ',')) {
                    if (!road.empty()) exp.roads.push_back(road);
                }
            }
            if (!grid_path.empty()) exp.grid = load_grid_file(grid_path);
            try {
                validate_week_split(exp.split);
            } catch (const ValidationError& e) {
                throw ConfigError(e.what());
            }
            return run_experiment_cmd(exp);
        }
        if (collect->parsed()) {
            return run_collect(collect_config, duration_s, interval_override, collect_out,
                               mock_provider, mock_seed, mock_start);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const InsufficientDataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ShapeError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ConvergenceError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const SearchFailedError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}
