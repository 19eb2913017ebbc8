#pragma once

#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dyncluster/batch.hpp"
#include "dyncluster/clustering.hpp"
#include "dyncluster/model.hpp"
#include "dyncluster/objective.hpp"
#include "dyncluster/operations.hpp"

namespace dyncluster {

// One verified, committed change; surfaced to observers so harnesses can
// assert the strict-improvement invariant per commit.
struct CommittedChange {
    EvolutionKind kind = EvolutionKind::Merge;
    double delta = 0.0;  // objective delta; meaningless when !has_delta
    bool has_delta = true;
};

using CommitObserver = std::function<void(const CommittedChange&)>;

// Gate verdict. KMeans commits carry a companion action that restores the
// cluster count: a merge pairs with a single-object split and vice versa;
// companions are encoded by object ids so they survive id reallocation.
struct GateDecision {
    CommittedChange change;
    std::optional<ObjectId> companion_split_object;
    std::optional<std::pair<ObjectId, ObjectId>> companion_merge_objects;
};

// Verification gate deciding whether a predicted change may commit. The
// objective gate accepts only strict improvements (delta < -1e-12); the
// DBSCAN gate checks core-point stability and density connectivity.
class ChangeGate {
public:
    virtual ~ChangeGate() = default;
    virtual std::optional<GateDecision> check_merge(const Clustering& L, ClusterId a,
                                                    ClusterId b) = 0;
    virtual std::optional<GateDecision> check_split(const Clustering& L, ClusterId c,
                                                    ObjectId out) = 0;
};

class ObjectiveGate : public ChangeGate {
public:
    ObjectiveGate(const SimilarityGraph& g, const Snapshot& records, ObjectiveSpec spec)
        : g_(g), records_(records), spec_(spec) {}

    std::optional<GateDecision> check_merge(const Clustering& L, ClusterId a,
                                            ClusterId b) override;
    std::optional<GateDecision> check_split(const Clustering& L, ClusterId c,
                                            ObjectId out) override;

private:
    const SimilarityGraph& g_;
    const Snapshot& records_;
    ObjectiveSpec spec_;
};

// DBSCAN has no objective function; a change commits only if every
// previously-core point in the affected clusters is still core under the
// current data, and the change respects density structure: merged clusters
// must be bridged by an eps-neighbor pair with a core endpoint, and a
// split-out object must not be density-connected to its cluster remainder.
class DbscanGate : public ChangeGate {
public:
    DbscanGate(const Snapshot& records, double eps, int min_pts,
               const std::set<ObjectId>& previous_core);

    std::optional<GateDecision> check_merge(const Clustering& L, ClusterId a,
                                            ClusterId b) override;
    std::optional<GateDecision> check_split(const Clustering& L, ClusterId c,
                                            ObjectId out) override;

    bool is_core_now(ObjectId id) const { return current_core_.count(id) != 0; }
    const std::set<ObjectId>& current_core() const { return current_core_; }

private:
    bool stable(const std::vector<ObjectId>& members) const;
    bool within_eps(ObjectId a, ObjectId b) const;

    const Snapshot& records_;
    double eps_;
    std::set<ObjectId> previous_core_;
    std::set<ObjectId> current_core_;
};

// Applies the round's operations to the clustering: Add inserts a singleton
// cluster, Remove deletes the object (empty clusters are dropped), Update is
// a remove-add sequence ending in a fresh singleton.
Clustering initial_processing(Clustering L, const std::vector<DataOperation>& ops,
                              const SimilarityGraph& g);

struct PassResult {
    bool changed = false;
};

// Seed a FIFO queue with the clusters the merge model predicts 1 (ascending
// cluster id); repeatedly dequeue C, pick the partner among the remaining
// queued clusters minimizing the merged cluster's merge-again probability,
// commit if the gate accepts (removing both), otherwise drop C alone.
PassResult merge_pass(Clustering& L, const SimilarityGraph& g, const TrainedModel& merge_model,
                      ChangeGate& gate, const CommitObserver& observer = nullptr);

// For each cluster the split model predicts 1, rank members by their
// similarity to the rest of the cluster, most-different first, and split out
// the first member the gate accepts (one object per cluster per pass).
PassResult split_pass(Clustering& L, const SimilarityGraph& g, const TrainedModel& split_model,
                      ChangeGate& gate, const CommitObserver& observer = nullptr);

// Alternates merge and split passes until neither commits a change. The
// caller performs initial processing first.
Clustering dynamicc_full(Clustering L, const SimilarityGraph& g, const Snapshot& records,
                         const ObjectiveSpec& spec, const TrainedModel& merge_model,
                         const TrainedModel& split_model,
                         const CommitObserver& observer = nullptr);

// Gate-parameterized variant (used for the DBSCAN mode).
Clustering dynamicc_full_gated(Clustering L, const SimilarityGraph& g,
                               const TrainedModel& merge_model, const TrainedModel& split_model,
                               ChangeGate& gate, const CommitObserver& observer = nullptr);

// Baseline: each added or updated object joins the cluster with maximal
// average similarity when it exceeds the threshold, else stays a singleton.
// Existing clusters are never split or merged.
Clustering naive_incremental(Clustering L, const SimilarityGraph& g,
                             const std::vector<DataOperation>& ops, double threshold);

// Baseline: initial processing followed by best-improvement search with the
// merge / split-out / move operators, restricted to the clusters in graph
// components touched by the round, capped at 10 * |touched| applications.
Clustering greedy_incremental(Clustering L, const SimilarityGraph& g, const Snapshot& records,
                              const ObjectiveSpec& spec, const std::vector<DataOperation>& ops);

}  // namespace dyncluster
