#pragma once

#include <string>
#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

enum class ObjectiveKind { Correlation, KMeans, DBIndex };

// All three objectives are minimized.
struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::Correlation;
    int k = 1;  // cluster count, KMeans only

    static ObjectiveSpec correlation() { return {ObjectiveKind::Correlation, 1}; }
    static ObjectiveSpec kmeans(int k) { return {ObjectiveKind::KMeans, k}; }
    static ObjectiveSpec dbindex() { return {ObjectiveKind::DBIndex, 1}; }
};

// Accepted id strings: "correlation", "kmeans:<k>", "db-index".
ObjectiveSpec parse_objective(const std::string& id);
std::string objective_id(const ObjectiveSpec& spec);

// A candidate change is accepted only when its delta is below this; guards
// against floating-point oscillation at ties.
inline constexpr double kImprovementTolerance = -1e-12;

// Sum of pairwise similarity inside one cluster (0 for singletons).
double intra_similarity(const std::vector<ObjectId>& cluster, const SimilarityGraph& g);

// Sum of pairwise similarity across two disjoint clusters.
double inter_similarity(const std::vector<ObjectId>& a, const std::vector<ObjectId>& b,
                        const SimilarityGraph& g);

// Sum over intra pairs of (1 - sim) plus sum over inter pairs of sim, each
// unordered object pair counted once.
double correlation_objective(const Clustering& clustering, const SimilarityGraph& g);

// Sum over clusters of squared Euclidean distance of members to the cluster
// mean. Records must be single-vector numeric; cluster count must equal k.
double kmeans_objective(const Clustering& clustering, const Snapshot& records, int k);

// Davies-Bouldin style index over the similarity graph. Dissimilarity is
// 1 - sim; scatter s_i is the mean intra-pair dissimilarity (0 for
// singletons) and separation m_ij the mean cross-pair dissimilarity.
// Requires >= 2 clusters; m_ij == 0 raises DegenerateSeparation.
double dbindex_objective(const Clustering& clustering, const SimilarityGraph& g);

double evaluate(const ObjectiveSpec& spec, const Clustering& clustering,
                const SimilarityGraph& g, const Snapshot& records);

// new_score - old_score if clusters c1 and c2 were merged. Correlation is
// computed incrementally from cross-pair terms; KMeans and DBIndex by local
// recompute. For KMeans the value compares raw sums of squares (the merged
// state has k-1 clusters).
double delta_if_merged(const Clustering& clustering, const SimilarityGraph& g, ClusterId c1,
                       ClusterId c2, const ObjectiveSpec& spec, const Snapshot& records);

// new_score - old_score if `member` were split out of its cluster into a
// singleton. Same evaluation strategy as delta_if_merged.
double delta_if_split_out(const Clustering& clustering, const SimilarityGraph& g,
                          ObjectId member, const ObjectiveSpec& spec, const Snapshot& records);

// Numeric vector of a record; NonNumericData unless the record is a single
// NumericVector attribute.
const std::vector<double>& numeric_vector(const ObjectRecord& rec);

}  // namespace dyncluster
