#pragma once

#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

enum class ModelKind { Merge, Split };

// Per-cluster feature vector.
//  d1  average intra-similarity, in [0,1]
//  d2  maximal average inter-similarity to any other cluster, in [0,1]
//  d3  cluster size (>= 1)
//  d4  size of the cluster attaining d2 (Merge vectors only; 1 when no
//      other cluster exists)
//  label  1 when the cluster merged/split, 0 otherwise, -1 when unlabeled
struct FeatureVector {
    ModelKind kind = ModelKind::Merge;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 1.0;
    double d4 = 1.0;
    int label = -1;

    std::vector<double> values() const {
        if (kind == ModelKind::Merge) return {d1, d2, d3, d4};
        return {d1, d2, d3};
    }

    bool operator==(const FeatureVector&) const = default;
};

// Features of an existing cluster within a clustering.
FeatureVector extract_features(ClusterId cluster, const Clustering& clustering,
                               const SimilarityGraph& g, ModelKind kind);

// Features the union of c1 and c2 would have, computed on a scratch view
// without mutating the clustering. d2/d4 range over clusters other than c1
// and c2.
FeatureVector features_of_merged(ClusterId c1, ClusterId c2, const Clustering& clustering,
                                 const SimilarityGraph& g, ModelKind kind);

}  // namespace dyncluster
