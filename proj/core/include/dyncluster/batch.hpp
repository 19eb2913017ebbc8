#pragma once

#include <optional>
#include <set>

#include "dyncluster/clustering.hpp"
#include "dyncluster/evolution.hpp"
#include "dyncluster/objective.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/rng.hpp"

namespace dyncluster {

// Best-improvement local search over merge / split-one-object-out / move
// neighbors. Terminates at a state where no single neighbor strictly
// improves the objective (delta < -1e-12). Deterministic: candidates are
// enumerated by (cluster-id, cluster-id) then (object-id, target) and ties
// on improvement keep the first candidate. Accepted steps are reported to
// the recorder (moves decompose into a split plus a merge).
//
// For KMeans the init must have exactly k clusters and only move neighbors
// are considered, so k is preserved.
Clustering hill_climb(const SimilarityGraph& g, const Snapshot& records,
                      const ObjectiveSpec& spec, Clustering init,
                      EvolutionRecorder* recorder = nullptr);

// Deterministic farthest-point k seeding plus nearest-seed assignment; the
// usual starting state for KMeans hill climbing. The graph is only used to
// prime the clustering's cached aggregates.
Clustering kmeans_seed_clustering(const Snapshot& records, int k, Rng& rng,
                                  const SimilarityGraph& g);

struct DbscanResult {
    Clustering clustering;
    std::set<ObjectId> core;
};

// Standard DBSCAN over single-vector numeric records. A point is core when
// it has at least min_pts neighbors within eps, itself included. Noise
// points become singleton clusters so the result is always a partition; the
// core set is returned for stability checks. Border points attach to the
// first cluster that reaches them in ascending-id scan order.
DbscanResult dbscan(const Snapshot& records, double eps, int min_pts);

}  // namespace dyncluster
