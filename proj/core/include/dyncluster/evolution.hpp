#pragma once

#include <set>
#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/features.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

enum class EvolutionKind { Merge, Split };

// One merge or split event, expressed over member sets so that it stays
// valid independent of cluster-id allocation.
//  Merge: inputs = the two disjoint source member sets, outputs = their union
//  Split: inputs = the source member set, outputs = the two parts
// `features` holds one feature vector per input cluster, snapshotted at
// decision time (two for Merge, one for Split). May be empty when the step
// was produced without a similarity graph in scope.
struct EvolutionStep {
    EvolutionKind kind = EvolutionKind::Merge;
    std::vector<std::vector<ObjectId>> inputs;
    std::vector<std::vector<ObjectId>> outputs;
    int round = 0;
    std::vector<FeatureVector> features;

    static EvolutionStep merge(std::vector<ObjectId> a, std::vector<ObjectId> b, int round);
    static EvolutionStep split(std::vector<ObjectId> from, std::vector<ObjectId> part_a,
                               std::vector<ObjectId> part_b, int round);

    // Merge: output equals the union of the disjoint inputs. Split: the two
    // outputs partition the input. Throws InconsistentPartitions otherwise.
    void validate() const;
};

// Ordered list of steps transforming one clustering into another.
using TransformationList = std::vector<EvolutionStep>;

// Append-only trace of the steps a batch run (or a derivation) accepted.
class EvolutionRecorder {
public:
    explicit EvolutionRecorder(int round = 0) : round_(round) {}

    int round() const { return round_; }
    void set_round(int round) { round_ = round; }

    void record(EvolutionStep step);
    const std::vector<EvolutionStep>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }

private:
    int round_;
    std::vector<EvolutionStep> steps_;
};

void record_step(EvolutionRecorder& recorder, EvolutionStep step);

// Rewrites an m-way merge (m >= 2 disjoint member sets) as m-1 two-way merge
// steps, folding smallest-first by minimum member id.
std::vector<EvolutionStep> decompose_multiway(const std::vector<std::vector<ObjectId>>& clusters,
                                              int round);

// Applies a transformation list to a clustering; throws
// InconsistentPartitions when a step's input clusters are not present.
void replay(Clustering& clustering, const TransformationList& list, const SimilarityGraph& g);

// Derives a transformation list carrying `old_clustering` (restricted to the
// ids surviving into `new_clustering`, with added ids as singletons) onto
// `new_clustering`. Every step snapshots features at its decision-time state
// over `g` (the post-round graph). `touched` must contain all added and
// removed ids; replay of the result is asserted internally.
TransformationList derive_cross_round(const Clustering& old_clustering,
                                      const Clustering& new_clustering,
                                      const std::set<ObjectId>& touched,
                                      const SimilarityGraph& g, int round);

}  // namespace dyncluster
