#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyncluster/data.hpp"
#include "dyncluster/dynamic.hpp"
#include "dyncluster/evalx.hpp"
#include "dyncluster/objective.hpp"
#include "dyncluster/serial.hpp"

namespace dyncluster {

// Multi-round comparison: per round, the batch hill climber re-clusters from
// scratch as ground truth while the dynamic engine, the naive baseline and
// the greedy baseline advance their own states; models retrain each round
// from the cross-round transformation list between consecutive truths.
struct ExperimentConfig {
    GeneratorConfig generator;
    WorkloadConfig workload;
    SimilarityParams similarity{Metric::Jaccard, 1.0, 0.3};
    ObjectiveSpec objective = ObjectiveSpec::correlation();
    double naive_threshold = 0.3;
    std::uint64_t seed = 42;

    // DynamicSet: the engine starts each round from its own previous result.
    // GreedySet: it starts from the greedy baseline's previous result.
    enum class Mode { DynamicSet, GreedySet } mode = Mode::DynamicSet;

    std::size_t store_capacity = 20000;
    // Timing repeats per round for the batch re-run and the dynamic
    // recluster+retrain; medians are reported when > 1.
    int timing_repeats = 1;
};

ExperimentConfig::Mode parse_experiment_mode(const std::string& id);

struct RoundOutcome {
    int round = 0;
    MetricReport dynamicc;
    MetricReport naive;
    MetricReport greedy;
    double t_batch = 0.0;      // hill-climb re-run, seconds (median)
    double t_recluster = 0.0;  // dynamic pass, seconds (median)
    double t_retrain = 0.0;    // harvest + fit, seconds (median)
    double t_naive = 0.0;
    double t_greedy = 0.0;
    std::size_t commits = 0;   // dynamic committed changes this round
    std::vector<double> commit_deltas;
};

struct ExperimentResult {
    std::vector<RoundOutcome> rounds;
    std::string summary;  // per-round table, one line per method
};

// Runs the full pipeline; when out_dir is set, writes per-round clusterings,
// metrics, models, traces and summary.txt under it.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<std::string>& out_dir = std::nullopt);

}  // namespace dyncluster
