#include "jamcast/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "jamcast/csvio.hpp"
#include "jamcast/detrng.hpp"
#include "jamcast/errors.hpp"
#include "jamcast/manifest.hpp"
#include "jamcast/numio.hpp"
#include "jamcast/svgplot.hpp"
#include "jamcast/timeutil.hpp"

namespace jamcast {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSaltRoadPick = 0x524F4144ULL;

std::string sanitize_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

void write_forecast_csv(const ForecastSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open forecast CSV for writing: " + path);
    out << "timestamp,actual,predicted\n";
    for (const auto& p : series.points) {
        out << p.timestamp << ',' << format_double(p.actual) << ','
            << format_double(p.predicted) << '\n';
    }
    if (!out) throw Error("failed writing forecast CSV: " + path);
}

}  // namespace

std::vector<std::string> pick_random_roads(const std::vector<std::string>& ids, int count,
                                           std::uint64_t seed) {
    if (count <= 0 || static_cast<std::size_t>(count) > ids.size()) {
        throw InsufficientDataError("cannot pick " + std::to_string(count) +
                                    " roads out of " + std::to_string(ids.size()));
    }
    std::vector<std::string> pool = ids;
    std::sort(pool.begin(), pool.end());
    DetStream rng = make_stream(seed, 0, 0, kSaltRoadPick);
    for (int i = 0; i < count; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) +
            static_cast<std::size_t>(rng.next() %
                                     static_cast<std::uint64_t>(pool.size() - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_week_split(config.split);
    const Dataset dataset = load_csv(config.dataset_path);
    if (dataset.empty()) {
        throw InsufficientDataError("experiment: dataset is empty");
    }

    const std::vector<std::string> all_ids = road_ids(dataset);
    std::vector<std::string> roads;
    if (!config.roads.empty()) {
        roads = config.roads;
        std::sort(roads.begin(), roads.end());
        roads.erase(std::unique(roads.begin(), roads.end()), roads.end());
        for (const auto& road : roads) {
            if (!std::binary_search(all_ids.begin(), all_ids.end(), road)) {
                throw InsufficientDataError("experiment: road '" + road +
                                            "' not present in the dataset");
            }
        }
    } else if (config.random_roads > 0) {
        roads = pick_random_roads(all_ids, config.random_roads, config.seed);
    } else {
        roads = all_ids;
    }

    fs::create_directories(config.out_dir);
    fs::create_directories(fs::path(config.out_dir) / "models");
    fs::create_directories(fs::path(config.out_dir) / "forecasts");

    ExperimentResult result;
    result.roads = roads;
    std::vector<ForecastSeries> svr_series, amwr_series, persist_series, mean_series;

    for (const auto& road : roads) {
        const Dataset rows = regularize_road_series(road_rows(dataset, road));
        const auto [train_rows, test_rows] = split_weeks(rows, config.split);

        SvrHyperparams hp = config.hp;
        if (!config.grid.empty()) {
            hp = grid_search(train_rows, road, config.grid, config.seed);
        }

        SvrModel model;
        try {
            model = train_road_model(train_rows, road, hp, config.seed);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("road " + road + ": " + e.what(),
                                   e.best_kkt_violation());
        }

        const std::string stem = sanitize_filename(road);
        const std::string model_rel = "models/" + stem + ".model";
        save_model_file(model, (fs::path(config.out_dir) / model_rel).string());
        result.outputs.push_back(model_rel);

        ForecastSeries proposed = forecast_week(model, test_rows);
        const std::string forecast_rel = "forecasts/" + stem + ".csv";
        write_forecast_csv(proposed, (fs::path(config.out_dir) / forecast_rel).string());
        result.outputs.push_back(forecast_rel);

        const std::string svg_rel = "road_" + stem + ".svg";
        write_forecast_svg(proposed, "Road " + road + ": actual vs predicted (test week)",
                           (fs::path(config.out_dir) / svg_rel).string());
        result.outputs.push_back(svg_rel);

        // AMWR baseline over the same two weeks, scored on the test week only.
        ForecastSeries amwr_road{road, {}};
        try {
            const auto points = run_amwr(rows, config.amwr, hp, config.seed);
            for (const auto& p : points) {
                if (p.timestamp >= config.split.test_start &&
                    p.timestamp < config.split.test_end + kSecondsPerDay) {
                    amwr_road.points.push_back({p.timestamp, p.predicted, p.actual});
                }
            }
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("road " + road + " (amwr): " + e.what(),
                                   e.best_kkt_violation());
        }
        if (amwr_road.points.empty()) {
            throw InsufficientDataError("experiment: AMWR produced no test-week points for road " +
                                        road);
        }

        auto baselines = naive_baselines(test_rows, train_rows, road);
        persist_series.push_back(std::move(baselines.at("persistence_last_week")));
        mean_series.push_back(std::move(baselines.at("global_mean")));
        svr_series.push_back(std::move(proposed));
        amwr_series.push_back(std::move(amwr_road));
    }

    result.proposed = build_report(svr_series, "svr");
    result.amwr_baseline = build_report(amwr_series, "amwr");
    result.persistence = build_report(persist_series, "persistence_last_week");
    result.global_mean = build_report(mean_series, "global_mean");
    result.comparison = compare_reports(result.proposed, result.amwr_baseline);

    write_report_csv(
        {result.proposed, result.amwr_baseline, result.persistence, result.global_mean},
        (fs::path(config.out_dir) / "report.csv").string());
    result.outputs.push_back("report.csv");
    write_comparison_csv(result.comparison,
                         (fs::path(config.out_dir) / "comparison.csv").string());
    result.outputs.push_back("comparison.csv");
    write_comparison_bars_svg(result.comparison, "svr", "amwr",
                              (fs::path(config.out_dir) / "comparison.svg").string());
    result.outputs.push_back("comparison.svg");

    RunManifest manifest;
    manifest.command = "experiment";
    manifest.inputs = {config.dataset_path};
    manifest.seed = config.seed;
    manifest.resolved_config["train_start"] = format_iso_date(config.split.train_start);
    manifest.resolved_config["train_end"] = format_iso_date(config.split.train_end);
    manifest.resolved_config["test_start"] = format_iso_date(config.split.test_start);
    manifest.resolved_config["test_end"] = format_iso_date(config.split.test_end);
    std::string roads_joined;
    for (const auto& road : roads) {
        if (!roads_joined.empty()) roads_joined += ',';
        roads_joined += road;
    }
    manifest.resolved_config["roads"] = roads_joined;
    manifest.resolved_config["svr_c"] = format_double(config.hp.C);
    manifest.resolved_config["svr_epsilon"] = format_double(config.hp.epsilon);
    manifest.resolved_config["svr_gamma"] = format_double(config.hp.gamma);
    manifest.resolved_config["svr_tol"] = format_double(config.hp.tol);
    manifest.resolved_config["svr_max_passes"] = std::to_string(config.hp.max_passes);
    manifest.resolved_config["grid_points"] = std::to_string(config.grid.size());
    manifest.resolved_config["amwr_min_prediction_window_s"] =
        format_double(config.amwr.min_prediction_window_s);
    manifest.resolved_config["amwr_max_prediction_window_s"] =
        format_double(config.amwr.max_prediction_window_s);
    manifest.resolved_config["amwr_growth_factor"] = format_double(config.amwr.growth_factor);
    manifest.outputs = result.outputs;
    write_manifest(manifest, (fs::path(config.out_dir) / "manifest.json").string());

    return result;
}

}  // namespace jamcast
