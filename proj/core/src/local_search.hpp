#pragma once

// Internal best-improvement neighbor search shared by the batch hill climber
// and the scoped greedy baseline. Not installed.

#include <functional>
#include <optional>

#include "dyncluster/clustering.hpp"
#include "dyncluster/objective.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster::detail {

struct Candidate {
    enum class Kind { Merge, SplitOut, Move } kind = Kind::Merge;
    ClusterId c1 = 0, c2 = 0;  // merge: sources; move: c1 = home, c2 = target
    ObjectId object = 0;       // split-out / move subject
    double delta = 0.0;
};

using ClusterFilter = std::function<bool(ClusterId)>;

// Best strictly-improving neighbor (delta < -1e-12) or nullopt. Enumeration
// order (merges by ascending cluster-id pair, then per ascending object id a
// split-out followed by moves to ascending targets) breaks ties; `in_scope`
// restricts which clusters may participate (null = all).
std::optional<Candidate> best_candidate(const Clustering& L, const SimilarityGraph& g,
                                        const Snapshot& records, const ObjectiveSpec& spec,
                                        const ClusterFilter& in_scope = nullptr);

}  // namespace dyncluster::detail
