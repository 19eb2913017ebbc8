#pragma once

#include <map>
#include <set>
#include <vector>

#include "dyncluster/record.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

// A partition of object ids into non-empty disjoint clusters.
//
// Per-cluster aggregates (size, intra-pair similarity sum) are maintained
// incrementally on every edit; tests fuzz them against full recomputation.
// Cluster ids are allocated monotonically and never reused within a run.
// Merge outputs get a fresh id; split keeps the remainder under the source
// id and gives the carved-out part a fresh id; removing a member keeps the
// cluster id.
class Clustering {
public:
    struct ClusterAggregates {
        double intra_sum = 0.0;  // sum of pairwise similarity inside the cluster
    };

    Clustering() = default;

    // Builds one singleton cluster per id, ascending, ids 1..n of clusters.
    static Clustering singletons(const std::vector<ObjectId>& ids);

    ClusterId add_singleton(ObjectId id);
    // Inserts id into an existing cluster (aggregate update via g).
    void add_to_cluster(ObjectId id, ClusterId cluster, const SimilarityGraph& g);
    // Removes id from its cluster; drops the cluster when it empties.
    void remove_object(ObjectId id, const SimilarityGraph& g);

    // Merges two clusters into a fresh cluster id and returns it.
    ClusterId merge_clusters(ClusterId a, ClusterId b, const SimilarityGraph& g);
    // Splits `part` out of `cluster` (part must be a proper non-empty subset);
    // the remainder keeps `cluster`'s id, the carved part gets a fresh id.
    ClusterId split_cluster(ClusterId cluster, const std::vector<ObjectId>& part,
                            const SimilarityGraph& g);
    // Moves one object to another existing cluster.
    void move_object(ObjectId id, ClusterId target, const SimilarityGraph& g);

    bool contains_object(ObjectId id) const { return assignment_.count(id) != 0; }
    bool has_cluster(ClusterId c) const { return clusters_.count(c) != 0; }
    ClusterId cluster_of(ObjectId id) const;
    const std::vector<ObjectId>& members(ClusterId c) const;
    const ClusterAggregates& aggregates(ClusterId c) const;

    std::size_t cluster_count() const { return clusters_.size(); }
    std::size_t object_count() const { return assignment_.size(); }
    std::vector<ClusterId> cluster_ids() const;
    std::vector<ObjectId> object_ids() const;

    // Clusters as member sets, each sorted, sorted lexicographically;
    // id-independent canonical form for equality in tests and replay checks.
    std::vector<std::vector<ObjectId>> canonical_clusters() const;
    bool same_partition(const Clustering& other) const;

    ClusterId next_cluster_id() const { return next_cluster_id_; }
    void set_next_cluster_id(ClusterId next);

    // Recomputes every cluster's cached aggregates against g. Call after the
    // similarity graph changed under a live clustering (per-round data
    // operations recompute edges incident to touched ids).
    void refresh_aggregates(const SimilarityGraph& g);

    // Rebuilds a clustering from explicit (cluster id -> members) content.
    static Clustering from_clusters(const std::map<ClusterId, std::vector<ObjectId>>& clusters,
                                    const SimilarityGraph& g);

    const std::map<ClusterId, std::vector<ObjectId>>& clusters() const { return clusters_; }

private:
    ClusterId allocate_id() { return next_cluster_id_++; }
    void insert_member(ClusterId c, ObjectId id);

    std::map<ObjectId, ClusterId> assignment_;
    std::map<ClusterId, std::vector<ObjectId>> clusters_;  // members kept sorted
    std::map<ClusterId, ClusterAggregates> aggregates_;
    ClusterId next_cluster_id_ = 1;
};

}  // namespace dyncluster
