#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jamcast/amwr.hpp"
#include "jamcast/evaluation.hpp"
#include "jamcast/pipeline.hpp"

namespace jamcast {

// Full experiment: per-road SVR trained on the first week and evaluated on
// the second, with AMWR and the naive baselines run over the same spans.
struct ExperimentConfig {
    std::string dataset_path;
    WeekSplit split;
    std::vector<std::string> roads;  // explicit selection; empty -> see random_roads
    int random_roads = 0;            // >0: seeded pick; 0 with empty roads: all roads
    std::uint64_t seed = 0;
    SvrHyperparams hp;
    std::vector<SvrHyperparams> grid;  // non-empty enables per-road grid search
    WindowController amwr;
    std::string out_dir;
};

struct ExperimentResult {
    std::vector<std::string> roads;
    EvaluationReport proposed;
    EvaluationReport amwr_baseline;
    EvaluationReport persistence;
    EvaluationReport global_mean;
    std::vector<ComparisonRow> comparison;  // proposed vs AMWR, Table-style
    std::vector<std::string> outputs;       // paths relative to out_dir
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Seeded selection of `count` distinct roads from the sorted id list.
std::vector<std::string> pick_random_roads(const std::vector<std::string>& ids, int count,
                                           std::uint64_t seed);

}  // namespace jamcast
