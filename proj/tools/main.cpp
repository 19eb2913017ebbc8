// dyncluster command-line interface: generate -> batch -> derive -> train ->
// dynamic -> evaluate, plus the end-to-end experiment runner.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dyncluster/batch.hpp"
#include "dyncluster/data.hpp"
#include "dyncluster/dynamic.hpp"
#include "dyncluster/error.hpp"
#include "dyncluster/evalx.hpp"
#include "dyncluster/evolution.hpp"
#include "dyncluster/experiment.hpp"
#include "dyncluster/model.hpp"
#include "dyncluster/serial.hpp"

namespace {

using namespace dyncluster;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string json_id_list(const std::set<ObjectId>& ids) {
    std::ostringstream out;
    out << "[";
    bool first = true;
    for (ObjectId id : ids) {
        out << (first ? "" : ",") << id;
        first = false;
    }
    out << "]";
    return out.str();
}

std::set<ObjectId> parse_id_list(const std::string& text) {
    std::set<ObjectId> ids;
    std::string cleaned;
    for (char c : text)
        cleaned.push_back((c == '[' || c == ']' || c == ',') ? ' ' : c);
    std::istringstream in(cleaned);
    ObjectId id;
    while (in >> id) ids.insert(id);
    return ids;
}

Clustering singleton_clustering(const Snapshot& snapshot) {
    std::vector<ObjectId> ids;
    for (const auto& [id, _] : snapshot) ids.push_back(id);
    return Clustering::singletons(ids);
}

// Accepts either a state JSON or a CSV (typed via --schema / metric).
ClusteringState load_input(const std::string& path, const SimilarityParams& params,
                           const std::string& schema_text) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        DatasetSchema schema;
        if (!schema_text.empty()) {
            schema = DatasetSchema::parse(schema_text);
        } else {
            std::ifstream probe(path);
            if (!probe) fail(ErrorCode::IoError, "cannot open " + path);
            std::string header;
            std::getline(probe, header);
            std::vector<std::string> cells;
            std::istringstream hin(header);
            std::string cell;
            while (std::getline(hin, cell, ',')) cells.push_back(cell);
            schema = DatasetSchema::infer(cells, params.metric);
        }
        ClusteringState state;
        state.params = params;
        state.records = ingest_csv_file(path, schema);
        state.graph = build_graph(state.records, state.params);
        state.clustering = singleton_clustering(state.records);
        state.clustering.refresh_aggregates(state.graph);
        return state;
    }
    return load_state_file(path);
}

TrainedModel load_model(const std::string& dir, ModelKind kind) {
    const std::string path =
        dir + "/" + (kind == ModelKind::Merge ? "merge.model" : "split.model");
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    TrainedModel model = TrainedModel::load(in);
    if (model.kind() != kind) fail(ErrorCode::IoError, "model kind mismatch in " + path);
    return model;
}

void save_model(const TrainedModel& model, const std::string& dir, ModelKind kind) {
    std::filesystem::create_directories(dir);
    const std::string path =
        dir + "/" + (kind == ModelKind::Merge ? "merge.model" : "split.model");
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    model.save(out);
}

int cmd_generate(const std::string& out_dir, GeneratorConfig gen, WorkloadConfig workload,
                 SimilarityParams params, std::uint64_t seed) {
    std::filesystem::create_directories(out_dir);
    Rng rng(seed);
    const SyntheticDataset dataset = generate_synthetic(gen, rng);
    const Workload w = drive_workload(dataset.records, workload);

    ClusteringState initial;
    initial.params = params;
    initial.records = w.initial;
    initial.graph = build_graph(initial.records, params);
    initial.clustering = singleton_clustering(initial.records);
    initial.clustering.refresh_aggregates(initial.graph);
    save_state_file(initial, out_dir + "/initial_state.json");
    save_rounds_file(w.rounds, out_dir + "/rounds.jsonl");

    std::ostringstream origins;
    origins << "{";
    bool first = true;
    for (const auto& [dup, orig] : dataset.origin_of) {
        origins << (first ? "" : ",") << "\"" << dup << "\":" << orig;
        first = false;
    }
    origins << "}\n";
    write_text_file(out_dir + "/origins.json", origins.str());
    write_text_file(out_dir + "/workload.cfg", workload.serialize());

    std::cout << "generated " << dataset.records.size() << " records (" << gen.n_originals
              << " originals), initial snapshot " << w.initial.size() << ", rounds "
              << w.rounds.size() << "\n";
    return 0;
}

int cmd_batch(const std::string& input, const std::string& schema_text,
              const std::string& objective_id_text, SimilarityParams params, double eps,
              int min_pts, bool use_dbscan, const std::string& out,
              const std::string& trace_path, const std::string& core_out, std::uint64_t seed) {
    ClusteringState state = load_input(input, params, schema_text);

    EvolutionRecorder recorder(0);
    if (use_dbscan) {
        const DbscanResult result = dbscan(state.records, eps, min_pts);
        state.clustering = Clustering::from_clusters(result.clustering.clusters(), state.graph);
        if (!core_out.empty()) write_text_file(core_out, json_id_list(result.core) + "\n");
        if (!trace_path.empty()) {
            // Express the result as an evolution from all-singletons.
            std::set<ObjectId> touched;
            for (const auto& [id, _] : state.records) touched.insert(id);
            const auto list = derive_cross_round(singleton_clustering(state.records),
                                                 state.clustering, touched, state.graph, 0);
            save_trace_file(list, trace_path);
        }
    } else {
        const ObjectiveSpec spec = parse_objective(objective_id_text);
        Clustering init = singleton_clustering(state.records);
        if (spec.kind == ObjectiveKind::KMeans) {
            Rng rng(seed);
            init = kmeans_seed_clustering(state.records, spec.k, rng, state.graph);
        }
        state.clustering =
            hill_climb(state.graph, state.records, spec, std::move(init), &recorder);
        if (!trace_path.empty()) save_trace_file(recorder.steps(), trace_path);
    }

    save_state_file(state, out);
    std::cout << "clusters " << state.clustering.cluster_count() << ", steps "
              << recorder.size() << "\n";
    return 0;
}

int cmd_derive(const std::string& old_path, const std::string& new_path,
               const std::string& touched_text, const std::string& ops_path,
               const std::string& out, int round) {
    const ClusteringState old_state = load_state_file(old_path);
    const ClusteringState new_state = load_state_file(new_path);
    std::set<ObjectId> touched = parse_id_list(touched_text);
    if (!ops_path.empty()) {
        for (const auto& plan : load_rounds_file(ops_path))
            for (ObjectId id : plan.touched_ids()) touched.insert(id);
    }
    const auto list = derive_cross_round(old_state.clustering, new_state.clustering, touched,
                                         new_state.graph, round);
    save_trace_file(list, out);
    std::cout << "changes " << list.size() << "\n";
    return 0;
}

int cmd_train(const std::vector<std::string>& traces, const std::vector<std::string>& states,
              const std::vector<std::string>& ops_files, const std::string& models_dir,
              std::uint64_t seed, std::size_t capacity, const std::string& report_path) {
    if (traces.size() != states.size())
        fail(ErrorCode::InvalidArgument, "need one --state per --trace");
    SampleStore merge_store(capacity);
    SampleStore split_store(capacity);
    Rng rng(seed);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto steps = load_trace_file(traces[i]);
        const ClusteringState state = load_state_file(states[i]);
        std::set<ObjectId> touched;
        if (i < ops_files.size() && !ops_files[i].empty()) {
            for (const auto& plan : load_rounds_file(ops_files[i]))
                for (ObjectId id : plan.touched_ids()) touched.insert(id);
        } else {
            for (const auto& [id, _] : state.records) touched.insert(id);
        }
        Rng round_rng = rng.fork(i);
        harvest_samples({&steps, &state.clustering, &state.graph, touched}, merge_store,
                        split_store, round_rng);
    }

    std::ostringstream report;
    auto fit_one = [&](SampleStore& store, ModelKind kind, const char* name) {
        TrainedModel model = store.positive_count() && store.negative_count()
                                 ? fit(store, kind)
                                 : TrainedModel::permissive(kind);
        save_model(model, models_dir, kind);
        const TrainingReport tr = training_report(model, store);
        report << name << "_samples " << tr.samples << "\n";
        report << name << "_accuracy " << tr.accuracy << "\n";
        report << name << "_recall " << tr.recall << "\n";
        report << name << "_theta " << model.theta() << "\n";
    };
    fit_one(merge_store, ModelKind::Merge, "merge");
    fit_one(split_store, ModelKind::Split, "split");

    std::cout << report.str();
    if (!report_path.empty()) write_text_file(report_path, report.str());
    return 0;
}

int cmd_dynamic(const std::string& algo, const std::string& objective_id_text,
                const std::string& models_dir, const std::string& state_path,
                const std::string& ops_path, double theta, double naive_threshold, double eps,
                int min_pts, bool use_dbscan, const std::string& core_path,
                const std::string& out, const std::string& metrics_path) {
    ClusteringState state = load_state_file(state_path);
    const auto plans = load_rounds_file(ops_path);

    std::ostringstream metrics;
    metrics.precision(17);
    for (const auto& plan : plans) {
        const auto apply_start = Clock::now();
        // Clustering edits happen against the post-round graph, so refresh
        // caches right after the graph changes.
        apply_operations(state.graph, state.records, plan.operations, state.params);
        state.clustering.refresh_aggregates(state.graph);
        const double t_apply = seconds_since(apply_start);

        const auto start = Clock::now();
        if (algo == "naive") {
            state.clustering = naive_incremental(std::move(state.clustering), state.graph,
                                                 plan.operations, naive_threshold);
        } else if (algo == "greedy") {
            const ObjectiveSpec spec = parse_objective(objective_id_text);
            state.clustering = greedy_incremental(std::move(state.clustering), state.graph,
                                                  state.records, spec, plan.operations);
        } else if (algo == "dynamicc") {
            TrainedModel merge_model = load_model(models_dir, ModelKind::Merge);
            TrainedModel split_model = load_model(models_dir, ModelKind::Split);
            if (theta > 0.0) {
                merge_model.set_theta(theta);
                split_model.set_theta(theta);
            }
            Clustering processed =
                initial_processing(std::move(state.clustering), plan.operations, state.graph);
            std::size_t commits = 0;
            const CommitObserver observer = [&](const CommittedChange&) { ++commits; };
            if (use_dbscan) {
                std::set<ObjectId> previous_core;
                if (!core_path.empty()) previous_core = parse_id_list(read_text_file(core_path));
                DbscanGate gate(state.records, eps, min_pts, previous_core);
                state.clustering = dynamicc_full_gated(std::move(processed), state.graph,
                                                       merge_model, split_model, gate, observer);
                if (!core_path.empty())
                    write_text_file(core_path, json_id_list(gate.current_core()) + "\n");
            } else {
                const ObjectiveSpec spec = parse_objective(objective_id_text);
                state.clustering =
                    dynamicc_full(std::move(processed), state.graph, state.records, spec,
                                  merge_model, split_model, observer);
            }
            metrics << "commits_round_" << plan.round << " " << commits << "\n";
        } else {
            fail(ErrorCode::InvalidArgument, "unknown algo '" + algo + "'");
        }
        metrics << "time_apply_round_" << plan.round << " " << t_apply << "\n";
        metrics << "time_recluster_round_" << plan.round << " " << seconds_since(start) << "\n";
    }

    if (!use_dbscan && algo != "naive") {
        const ObjectiveSpec spec = parse_objective(objective_id_text);
        metrics << "objective " << evaluate(spec, state.clustering, state.graph, state.records)
                << "\n";
    }
    metrics << "clusters " << state.clustering.cluster_count() << "\n";

    save_state_file(state, out);
    if (!metrics_path.empty()) write_text_file(metrics_path, metrics.str());
    std::cout << "clusters " << state.clustering.cluster_count() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& predicted_path, const std::string& truth_path,
                 const std::string& objective_id_text, const std::string& metrics_path) {
    const ClusteringState predicted = load_state_file(predicted_path);
    const ClusteringState truth = load_state_file(truth_path);
    const ObjectiveSpec spec = parse_objective(objective_id_text);
    const MetricReport report =
        metric_report(predicted.clustering, truth.clustering, spec, truth.graph, truth.records);
    const std::string text = serialize_metric_report(report);
    std::cout << text;
    if (!metrics_path.empty()) write_text_file(metrics_path, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic clustering engine"};
    app.require_subcommand(1);

    std::string input, out, out_dir, schema_text, metric_id_text = "jaccard";
    std::string objective_id_text = "correlation";
    std::string trace_path, core_path, models_dir, state_path, ops_path, metrics_path;
    std::string old_path, new_path, touched_text, report_path, algo = "dynamicc";
    std::string distribution = "uniform", mode_text = "dynamicset";
    double scale = 1.0, prune = 0.1, eps = 0.0, theta = 0.0, naive_threshold = 0.3;
    int min_pts = 0, round = 1, repeats = 1;
    std::uint64_t seed = 42;
    GeneratorConfig gen;
    std::size_t capacity = 20000;
    std::vector<std::string> traces, states, ops_files;
    std::string workload_cfg_path;
    std::size_t initial_count = 0, adds = 0, removes = 0, updates = 0;
    int rounds = 0;

    auto add_similarity_flags = [&](CLI::App* cmd) {
        cmd->add_option("--metric", metric_id_text,
                        "jaccard | cosine-trigram | euclidean | levenshtein");
        cmd->add_option("--scale", scale, "euclidean distance scale");
        cmd->add_option("--prune", prune, "similarity pruning threshold");
    };

    auto* generate = app.add_subcommand("generate", "synthetic data and workload emission");
    generate->add_option("--out", out_dir, "output directory")->required();
    generate->add_option("--originals", gen.n_originals, "original record count")->required();
    generate->add_option("--duplicates", gen.n_duplicates, "duplicate record count");
    generate->add_option("--distribution", distribution, "uniform | poisson | zipf");
    generate->add_option("--lambda", gen.poisson_lambda, "poisson lambda");
    generate->add_option("--zipf-s", gen.zipf_s, "zipf exponent");
    generate->add_option("--seed", seed, "rng seed");
    generate->add_option("--initial", initial_count, "initial snapshot size");
    generate->add_option("--rounds", rounds, "round count");
    generate->add_option("--adds", adds, "adds per round");
    generate->add_option("--removes", removes, "removes per round");
    generate->add_option("--updates", updates, "updates per round");
    generate->add_option("--workload", workload_cfg_path, "workload config file");
    add_similarity_flags(generate);

    auto* batch = app.add_subcommand("batch", "batch clustering from scratch");
    batch->add_option("--input", input, "state JSON or CSV")->required();
    batch->add_option("--schema", schema_text, "CSV column roles");
    batch->add_option("--objective", objective_id_text, "correlation | kmeans:<k> | db-index");
    batch->add_option("--eps", eps, "dbscan radius (switches to dbscan)");
    batch->add_option("--min-pts", min_pts, "dbscan density threshold");
    batch->add_option("--out", out, "output state JSON")->required();
    batch->add_option("--trace", trace_path, "evolution trace output");
    batch->add_option("--core-out", core_path, "dbscan core-id output");
    batch->add_option("--seed", seed, "rng seed");
    add_similarity_flags(batch);

    auto* derive = app.add_subcommand("derive", "cross-round transformation list");
    derive->add_option("--old", old_path, "old state JSON")->required();
    derive->add_option("--new", new_path, "new state JSON")->required();
    derive->add_option("--touched", touched_text, "touched ids, e.g. 6,7");
    derive->add_option("--ops", ops_path, "round file supplying touched ids");
    derive->add_option("--round", round, "round index for the emitted steps");
    derive->add_option("--out", out, "transformation list output")->required();

    auto* train = app.add_subcommand("train", "harvest traces and fit the models");
    train->add_option("--trace", traces, "trace file (repeatable)")->required();
    train->add_option("--state", states, "round-end state per trace (repeatable)")->required();
    train->add_option("--ops", ops_files, "round file per trace (repeatable)");
    train->add_option("--models", models_dir, "model output directory")->required();
    train->add_option("--seed", seed, "rng seed");
    train->add_option("--capacity", capacity, "sample store capacity");
    train->add_option("--report", report_path, "training report output");

    auto* dynamic = app.add_subcommand("dynamic", "re-cluster one or more rounds");
    dynamic->add_option("--algo", algo, "dynamicc | naive | greedy");
    dynamic->add_option("--objective", objective_id_text, "objective id");
    dynamic->add_option("--models", models_dir, "model directory (dynamicc)");
    dynamic->add_option("--state", state_path, "input state JSON")->required();
    dynamic->add_option("--ops", ops_path, "round file (one JSON object per line)")->required();
    dynamic->add_option("--theta", theta, "decision threshold override");
    dynamic->add_option("--threshold", naive_threshold, "naive similarity threshold");
    dynamic->add_option("--eps", eps, "dbscan radius (switches the gate)");
    dynamic->add_option("--min-pts", min_pts, "dbscan density threshold");
    dynamic->add_option("--core", core_path, "previous core ids (updated in place)");
    dynamic->add_option("--out", out, "output state JSON")->required();
    dynamic->add_option("--metrics", metrics_path, "timing/metrics output");

    auto* evaluate = app.add_subcommand("evaluate", "compare two clusterings");
    evaluate->add_option("--predicted", input, "predicted state JSON")->required();
    evaluate->add_option("--truth", new_path, "ground-truth state JSON")->required();
    evaluate->add_option("--objective", objective_id_text, "objective id");
    evaluate->add_option("--metrics", metrics_path, "metrics output file");

    auto* experiment = app.add_subcommand("experiment", "full multi-round comparison");
    experiment->add_option("--out", out_dir, "output directory")->required();
    experiment->add_option("--mode", mode_text, "dynamicset | greedyset");
    experiment->add_option("--seed", seed, "rng seed");
    experiment->add_option("--originals", gen.n_originals, "original record count");
    experiment->add_option("--duplicates", gen.n_duplicates, "duplicate record count");
    experiment->add_option("--distribution", distribution, "uniform | poisson | zipf");
    experiment->add_option("--initial", initial_count, "initial snapshot size");
    experiment->add_option("--rounds", rounds, "round count");
    experiment->add_option("--adds", adds, "adds per round");
    experiment->add_option("--removes", removes, "removes per round");
    experiment->add_option("--updates", updates, "updates per round");
    experiment->add_option("--objective", objective_id_text, "objective id");
    experiment->add_option("--repeats", repeats, "timing repeats per round");
    experiment->add_option("--threshold", naive_threshold, "naive similarity threshold");
    add_similarity_flags(experiment);

    CLI11_PARSE(app, argc, argv);

    try {
        SimilarityParams params;
        params.metric = parse_metric(metric_id_text);
        params.euclidean_scale = scale;
        params.prune_threshold = prune;

        if (generate->parsed()) {
            gen.distribution = parse_distribution(distribution);
            WorkloadConfig workload;
            if (!workload_cfg_path.empty()) {
                workload = WorkloadConfig::parse(read_text_file(workload_cfg_path));
            } else {
                workload.initial_count = initial_count;
                workload.rounds.assign(static_cast<std::size_t>(rounds),
                                       {adds, removes, updates});
            }
            workload.seed = seed;
            return cmd_generate(out_dir, gen, workload, params, seed);
        }
        if (batch->parsed()) {
            const bool use_dbscan = eps > 0.0;
            if (use_dbscan && min_pts < 1)
                fail(ErrorCode::InvalidArgument, "--eps needs --min-pts");
            return cmd_batch(input, schema_text, objective_id_text, params, eps, min_pts,
                             use_dbscan, out, trace_path, core_path, seed);
        }
        if (derive->parsed())
            return cmd_derive(old_path, new_path, touched_text, ops_path, out, round);
        if (train->parsed())
            return cmd_train(traces, states, ops_files, models_dir, seed, capacity, report_path);
        if (dynamic->parsed()) {
            const bool use_dbscan = eps > 0.0;
            if (use_dbscan && min_pts < 1)
                fail(ErrorCode::InvalidArgument, "--eps needs --min-pts");
            return cmd_dynamic(algo, objective_id_text, models_dir, state_path, ops_path, theta,
                               naive_threshold, eps, min_pts, use_dbscan, core_path, out,
                               metrics_path);
        }
        if (evaluate->parsed())
            return cmd_evaluate(input, new_path, objective_id_text, metrics_path);
        if (experiment->parsed()) {
            ExperimentConfig config;
            config.generator = gen;
            config.generator.distribution = parse_distribution(distribution);
            config.workload.initial_count = initial_count;
            config.workload.rounds.assign(static_cast<std::size_t>(rounds),
                                          {adds, removes, updates});
            config.workload.seed = seed;
            config.similarity = params;
            config.objective = parse_objective(objective_id_text);
            config.naive_threshold = naive_threshold;
            config.seed = seed;
            config.mode = parse_experiment_mode(mode_text);
            config.timing_repeats = repeats;
            const ExperimentResult result = run_experiment(config, out_dir);
            std::cout << result.summary;
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
