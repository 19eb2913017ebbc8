#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/evolution.hpp"
#include "dyncluster/operations.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/similarity.hpp"

namespace dyncluster {

// Self-contained clustering state: similarity parameters, the record
// snapshot, the stored graph edges, and the partition. Versioned JSON.
struct ClusteringState {
    SimilarityParams params;
    Snapshot records;
    SimilarityGraph graph;
    Clustering clustering;
};

std::string serialize_state(const ClusteringState& state);
ClusteringState parse_state(const std::string& text);
void save_state_file(const ClusteringState& state, const std::string& path);
ClusteringState load_state_file(const std::string& path);

// One round as JSON: {"round":n,"adds":[records],"removes":[ids],
// "updates":[records]}; operations apply adds, then removes, then updates.
std::string serialize_round(const RoundPlan& plan);
RoundPlan parse_round(const std::string& text);
void save_rounds_file(const std::vector<RoundPlan>& rounds, const std::string& path);
// Reads either one JSON object per line or a single object.
std::vector<RoundPlan> load_rounds_file(const std::string& path);

// Evolution traces: one step per line,
// {"kind":"merge"|"split","inputs":[[ids]],"outputs":[[ids]],"round":n,
//  "features":[[d1,d2,d3(,d4)]...]}.
std::string serialize_step(const EvolutionStep& step);
EvolutionStep parse_step(const std::string& line);
void save_trace_file(const std::vector<EvolutionStep>& steps, const std::string& path);
std::vector<EvolutionStep> load_trace_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dyncluster
