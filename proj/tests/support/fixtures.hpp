#pragma once

// Shared test fixtures: the seven-object walkthrough graph, random
// instances, and brute-force oracles kept independent of the library's
// incremental code paths.

#include <map>
#include <set>
#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/features.hpp"
#include "dyncluster/model.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/rng.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster::testing {

// Seven objects r1..r7: a 0.9-chain r1-r2-r3, the 0.9/0.8/0.7 triangle
// r4-r5-r6, and the 1.0 edge r1-r7. All-singleton correlation score 5.2.
inline SimilarityGraph example1_graph() {
    SimilarityGraph g;
    for (ObjectId id = 1; id <= 7; ++id) g.add_node(id);
    g.set_edge(1, 2, 0.9);
    g.set_edge(2, 3, 0.9);
    g.set_edge(4, 5, 0.9);
    g.set_edge(4, 6, 0.8);
    g.set_edge(5, 6, 0.7);
    g.set_edge(1, 7, 1.0);
    return g;
}

// Figure-style old clustering over the first five objects.
inline Clustering example1_old_clustering(const SimilarityGraph& g) {
    return Clustering::from_clusters({{1, {1, 2, 3}}, {2, {4, 5}}}, g);
}

// The target after r6 and r7 arrive.
inline std::vector<std::vector<ObjectId>> example1_new_partition() {
    return {{1, 7}, {2, 3}, {4, 5, 6}};
}

// Hand-built "adequately trained" models for walkthrough tests: probability
// rises with external pull (d2) and falls with cohesion (d1), and stays above
// theta for every cluster arising in the walkthrough.
inline TrainedModel stub_merge_model() {
    return TrainedModel::from_parameters(ModelKind::Merge, {-2.0, 1.0, 0.0, 0.0}, 3.0,
                                         FeatureNormalization{0.0, 1.0, 0.0, 1.0}, 0.7);
}

inline TrainedModel stub_split_model() {
    return TrainedModel::from_parameters(ModelKind::Split, {-2.0, 1.0, 0.0}, 3.0,
                                         FeatureNormalization{0.0, 1.0, 0.0, 1.0}, 0.7);
}

inline SimilarityGraph random_graph(Rng& rng, int n, double density) {
    SimilarityGraph g;
    for (ObjectId id = 1; id <= n; ++id) g.add_node(id);
    for (ObjectId a = 1; a <= n; ++a) {
        for (ObjectId b = a + 1; b <= n; ++b) {
            if (rng.uniform_real() < density) {
                const double w = 0.05 + 0.95 * rng.uniform_real();
                g.set_edge(a, b, w);
            }
        }
    }
    return g;
}

inline Clustering random_partition(Rng& rng, const std::vector<ObjectId>& ids,
                                   const SimilarityGraph& g) {
    std::map<ClusterId, std::vector<ObjectId>> clusters;
    ClusterId next = 1;
    std::vector<ClusterId> open;
    for (ObjectId id : ids) {
        // Chinese-restaurant style assignment.
        if (open.empty() || rng.uniform_real() < 0.35) {
            clusters[next] = {id};
            open.push_back(next);
            ++next;
        } else {
            clusters[open[rng.uniform_u64(open.size())]].push_back(id);
        }
    }
    return Clustering::from_clusters(clusters, g);
}

// All partitions of {1..n} as restricted-growth strings.
inline std::vector<std::vector<int>> all_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int i, int max_label) -> void {
        if (i == n) {
            out.push_back(assign);
            return;
        }
        for (int label = 0; label <= max_label + 1; ++label) {
            assign[static_cast<std::size_t>(i)] = label;
            self(self, i + 1, std::max(max_label, label));
        }
    };
    rec(rec, 0, -1);
    return out;
}

inline Clustering partition_from_labels(const std::vector<int>& labels,
                                        const SimilarityGraph& g) {
    std::map<ClusterId, std::vector<ObjectId>> clusters;
    for (std::size_t i = 0; i < labels.size(); ++i)
        clusters[labels[i] + 1].push_back(static_cast<ObjectId>(i + 1));
    return Clustering::from_clusters(clusters, g);
}

}  // namespace dyncluster::testing
