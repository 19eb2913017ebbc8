#include "dyncluster/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyncluster/batch.hpp"
#include "dyncluster/error.hpp"
#include "dyncluster/evolution.hpp"
#include "dyncluster/model.hpp"

namespace dyncluster {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

Clustering singleton_clustering(const Snapshot& snapshot) {
    std::vector<ObjectId> ids;
    ids.reserve(snapshot.size());
    for (const auto& [id, _] : snapshot) ids.push_back(id);
    return Clustering::singletons(ids);
}

TrainedModel fit_or_permissive(const SampleStore& store, ModelKind kind) {
    if (store.positive_count() == 0 || store.negative_count() == 0)
        return TrainedModel::permissive(kind);
    return fit(store, kind);
}

void save_clusters_json(const Clustering& L, int round, const std::string& path) {
    std::ostringstream out;
    out << "{\"round\":" << round << ",\"clusters\":[";
    bool first_cluster = true;
    for (const auto& members : L.canonical_clusters()) {
        out << (first_cluster ? "[" : ",[");
        first_cluster = false;
        for (std::size_t i = 0; i < members.size(); ++i)
            out << (i ? "," : "") << members[i];
        out << "]";
    }
    out << "]}\n";
    write_text_file(path, out.str());
}

std::string round_tag(int round) {
    std::string tag = std::to_string(round);
    while (tag.size() < 2) tag.insert(tag.begin(), '0');
    return tag;
}

}  // namespace

ExperimentConfig::Mode parse_experiment_mode(const std::string& id) {
    if (id == "dynamicset") return ExperimentConfig::Mode::DynamicSet;
    if (id == "greedyset") return ExperimentConfig::Mode::GreedySet;
    fail(ErrorCode::InvalidArgument, "unknown experiment mode '" + id + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::optional<std::string>& out_dir) {
    namespace fs = std::filesystem;
    if (out_dir) fs::create_directories(*out_dir);
    auto out_path = [&](const std::string& name) { return *out_dir + "/" + name; };

    Rng rng(config.seed);
    Rng data_rng = rng.fork(1);
    const SyntheticDataset dataset = generate_synthetic(config.generator, data_rng);
    const Workload workload = drive_workload(dataset.records, config.workload);

    Snapshot snapshot = workload.initial;
    SimilarityGraph graph = build_graph(snapshot, config.similarity);

    // Initial batch run from singletons; its trace seeds the models.
    EvolutionRecorder initial_recorder(0);
    Clustering truth =
        hill_climb(graph, snapshot, config.objective, singleton_clustering(snapshot),
                   &initial_recorder);

    SampleStore merge_store(config.store_capacity);
    SampleStore split_store(config.store_capacity);
    std::set<ObjectId> all_ids;
    for (const auto& [id, _] : snapshot) all_ids.insert(id);
    Rng harvest_rng = rng.fork(2);
    harvest_samples({&initial_recorder.steps(), &truth, &graph, all_ids}, merge_store,
                    split_store, harvest_rng);

    TrainedModel merge_model = fit_or_permissive(merge_store, ModelKind::Merge);
    TrainedModel split_model = fit_or_permissive(split_store, ModelKind::Split);

    if (out_dir) {
        save_trace_file(initial_recorder.steps(), out_path("trace_initial.jsonl"));
        save_rounds_file(workload.rounds, out_path("rounds.jsonl"));
        save_state_file({config.similarity, snapshot, graph, truth},
                        out_path("initial_state.json"));
    }

    Clustering dynamic_state = truth;
    Clustering naive_state = truth;
    Clustering greedy_state = truth;

    ExperimentResult result;
    std::ostringstream summary;
    summary << "round method f1 precision recall purity inverse_purity objective "
               "t_recluster t_retrain\n";

    for (const auto& plan : workload.rounds) {
        RoundOutcome outcome;
        outcome.round = plan.round;
        const Clustering truth_before = truth;

        // The per-round dynamic start per the configured mode; captured
        // before this round's greedy run advances.
        const Clustering dynamic_start =
            config.mode == ExperimentConfig::Mode::GreedySet ? greedy_state : dynamic_state;

        apply_operations(graph, snapshot, plan.operations, config.similarity);

        // Ground truth: batch re-run from scratch on the updated snapshot.
        std::vector<double> batch_times;
        for (int rep = 0; rep < std::max(1, config.timing_repeats); ++rep) {
            const auto start = Clock::now();
            Clustering fresh =
                hill_climb(graph, snapshot, config.objective, singleton_clustering(snapshot));
            batch_times.push_back(seconds_since(start));
            if (rep == 0) truth = std::move(fresh);
        }
        outcome.t_batch = median(batch_times);

        // Dynamic engine: recluster with the models trained through the
        // previous round, then retrain from the cross-round derivation.
        Clustering dynamic_out;
        std::vector<double> recluster_times;
        for (int rep = 0; rep < std::max(1, config.timing_repeats); ++rep) {
            Clustering start_state = dynamic_start;
            const auto start = Clock::now();
            start_state.refresh_aggregates(graph);
            Clustering processed = initial_processing(start_state, plan.operations, graph);
            std::vector<double> deltas;
            Clustering out = dynamicc_full(
                std::move(processed), graph, snapshot, config.objective, merge_model,
                split_model, [&](const CommittedChange& change) {
                    if (change.has_delta) deltas.push_back(change.delta);
                });
            recluster_times.push_back(seconds_since(start));
            if (rep == 0) {
                dynamic_out = std::move(out);
                outcome.commits = deltas.size();
                outcome.commit_deltas = std::move(deltas);
            }
        }
        outcome.t_recluster = median(recluster_times);
        dynamic_state = dynamic_out;

        // Baselines.
        {
            const auto start = Clock::now();
            naive_state.refresh_aggregates(graph);
            naive_state =
                naive_incremental(std::move(naive_state), graph, plan.operations,
                                  config.naive_threshold);
            outcome.t_naive = seconds_since(start);
        }
        {
            const auto start = Clock::now();
            greedy_state.refresh_aggregates(graph);
            greedy_state = greedy_incremental(std::move(greedy_state), graph, snapshot,
                                              config.objective, plan.operations);
            outcome.t_greedy = seconds_since(start);
        }

        // Retrain: derive the cross-round transformation between consecutive
        // truths, harvest, refit.
        std::set<ObjectId> touched;
        for (ObjectId id : plan.touched_ids()) touched.insert(id);
        std::vector<double> retrain_times;
        TransformationList derived;
        for (int rep = 0; rep < std::max(1, config.timing_repeats); ++rep) {
            SampleStore merge_copy = merge_store;
            SampleStore split_copy = split_store;
            Rng round_rng = rng.fork(100 + static_cast<std::uint64_t>(plan.round));
            const auto start = Clock::now();
            TransformationList list =
                derive_cross_round(truth_before, truth, touched, graph, plan.round);
            harvest_samples({&list, &truth, &graph, touched}, merge_copy, split_copy, round_rng);
            TrainedModel new_merge = fit_or_permissive(merge_copy, ModelKind::Merge);
            TrainedModel new_split = fit_or_permissive(split_copy, ModelKind::Split);
            retrain_times.push_back(seconds_since(start));
            if (rep == 0) {
                derived = std::move(list);
                merge_store = std::move(merge_copy);
                split_store = std::move(split_copy);
                merge_model = std::move(new_merge);
                split_model = std::move(new_split);
            }
        }
        outcome.t_retrain = median(retrain_times);

        // Quality vs the batch truth.
        outcome.dynamicc =
            metric_report(dynamic_state, truth, config.objective, graph, snapshot);
        outcome.dynamicc.wall_times["recluster"] = outcome.t_recluster;
        outcome.dynamicc.wall_times["retrain"] = outcome.t_retrain;
        outcome.naive = metric_report(naive_state, truth, config.objective, graph, snapshot);
        outcome.naive.wall_times["recluster"] = outcome.t_naive;
        outcome.greedy = metric_report(greedy_state, truth, config.objective, graph, snapshot);
        outcome.greedy.wall_times["recluster"] = outcome.t_greedy;

        auto line = [&](const char* method, const MetricReport& m, double recluster,
                        double retrain) {
            summary << plan.round << " " << method << " " << m.f1 << " " << m.precision << " "
                    << m.recall << " " << m.purity << " " << m.inverse_purity << " "
                    << m.objective << " " << recluster << " " << retrain << "\n";
        };
        line("dynamicc", outcome.dynamicc, outcome.t_recluster, outcome.t_retrain);
        line("naive", outcome.naive, outcome.t_naive, 0.0);
        line("greedy", outcome.greedy, outcome.t_greedy, 0.0);
        summary << plan.round << " batch 1 1 1 1 1 "
                << evaluate(config.objective, truth, graph, snapshot) << " " << outcome.t_batch
                << " 0\n";

        if (out_dir) {
            const std::string tag = round_tag(plan.round);
            save_clusters_json(truth, plan.round, out_path("clusters_batch_" + tag + ".json"));
            save_clusters_json(dynamic_state, plan.round,
                               out_path("clusters_dynamicc_" + tag + ".json"));
            save_clusters_json(naive_state, plan.round,
                               out_path("clusters_naive_" + tag + ".json"));
            save_clusters_json(greedy_state, plan.round,
                               out_path("clusters_greedy_" + tag + ".json"));
            save_trace_file(derived, out_path("derived_" + tag + ".jsonl"));
            write_text_file(out_path("metrics_dynamicc_" + tag + ".txt"),
                            serialize_metric_report(outcome.dynamicc));
            write_text_file(out_path("metrics_naive_" + tag + ".txt"),
                            serialize_metric_report(outcome.naive));
            write_text_file(out_path("metrics_greedy_" + tag + ".txt"),
                            serialize_metric_report(outcome.greedy));
            std::ofstream merge_out(out_path("merge_" + tag + ".model"));
            merge_model.save(merge_out);
            std::ofstream split_out(out_path("split_" + tag + ".model"));
            split_model.save(split_out);
        }

        result.rounds.push_back(std::move(outcome));
    }

    result.summary = summary.str();
    if (out_dir) write_text_file(out_path("summary.txt"), result.summary);
    return result;
}

}  // namespace dyncluster
