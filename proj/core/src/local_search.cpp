#include "local_search.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "dyncluster/error.hpp"

namespace dyncluster::detail {

namespace {

bool allowed(const ClusterFilter& in_scope, ClusterId c) { return !in_scope || in_scope(c); }

// Cross-pair similarity sums from cluster `c` to every edge-connected
// cluster, keyed by cluster id (ordered).
std::map<ClusterId, double> cluster_cross_sums(const Clustering& L, const SimilarityGraph& g,
                                               ClusterId c) {
    std::map<ClusterId, double> cross;
    for (ObjectId m : L.members(c)) {
        for (const auto& [nb, w] : g.neighbors(m)) {
            const ClusterId other = L.cluster_of(nb);
            if (other != c) cross[other] += w;
        }
    }
    return cross;
}

// Correlation deltas in closed form; only edge-connected merges and moves
// can improve, so the candidate set stays O(E + n).
std::optional<Candidate> best_correlation(const Clustering& L, const SimilarityGraph& g,
                                          const ClusterFilter& in_scope) {
    std::optional<Candidate> best;
    auto consider = [&](const Candidate& cand) {
        if (cand.delta >= kImprovementTolerance) return;
        if (!best || cand.delta < best->delta) best = cand;
    };

    for (const auto& [c, members] : L.clusters()) {
        if (!allowed(in_scope, c)) continue;
        for (const auto& [other, cross] : cluster_cross_sums(L, g, c)) {
            if (other <= c || !allowed(in_scope, other)) continue;
            const double pairs = static_cast<double>(members.size()) *
                                 static_cast<double>(L.members(other).size());
            consider({Candidate::Kind::Merge, c, other, 0, pairs - 2.0 * cross});
        }
    }

    for (ObjectId r : L.object_ids()) {
        const ClusterId home = L.cluster_of(r);
        if (!allowed(in_scope, home)) continue;
        const std::size_t home_size = L.members(home).size();
        if (home_size < 2) continue;
        double to_home = 0.0;
        std::map<ClusterId, double> cross;
        for (const auto& [nb, w] : g.neighbors(r)) {
            const ClusterId other = L.cluster_of(nb);
            if (other == home)
                to_home += w;
            else
                cross[other] += w;
        }
        const double split_delta = 2.0 * to_home - static_cast<double>(home_size - 1);
        consider({Candidate::Kind::SplitOut, home, 0, r, split_delta});
        // Moves to unconnected targets are dominated by the bare split-out.
        for (const auto& [target, s] : cross) {
            if (!allowed(in_scope, target)) continue;
            const double move_delta =
                split_delta + static_cast<double>(L.members(target).size()) - 2.0 * s;
            consider({Candidate::Kind::Move, home, target, r, move_delta});
        }
    }
    return best;
}

double kmeans_cluster_cost(const std::vector<ObjectId>& members, const Snapshot& records) {
    if (members.empty()) return 0.0;
    const std::size_t dim = numeric_vector(records.at(members.front())).size();
    std::vector<double> sum(dim, 0.0);
    double sq = 0.0;
    for (ObjectId m : members) {
        const auto& v = numeric_vector(records.at(m));
        if (v.size() != dim) fail(ErrorCode::DimensionMismatch, "ragged numeric records");
        for (std::size_t i = 0; i < dim; ++i) {
            sum[i] += v[i];
            sq += v[i] * v[i];
        }
    }
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) mean_sq += sum[i] * sum[i];
    return sq - mean_sq / static_cast<double>(members.size());
}

// KMeans neighbors: moves only (k is preserved); a move may not empty its
// source cluster.
std::optional<Candidate> best_kmeans(const Clustering& L, const Snapshot& records,
                                     const ClusterFilter& in_scope) {
    std::optional<Candidate> best;
    const auto ids = L.cluster_ids();
    for (ObjectId r : L.object_ids()) {
        const ClusterId home = L.cluster_of(r);
        if (!allowed(in_scope, home)) continue;
        const auto& home_members = L.members(home);
        if (home_members.size() < 2) continue;
        std::vector<ObjectId> without;
        without.reserve(home_members.size() - 1);
        for (ObjectId m : home_members)
            if (m != r) without.push_back(m);
        const double home_delta =
            kmeans_cluster_cost(without, records) - kmeans_cluster_cost(home_members, records);
        for (ClusterId target : ids) {
            if (target == home || !allowed(in_scope, target)) continue;
            std::vector<ObjectId> with = L.members(target);
            with.insert(std::upper_bound(with.begin(), with.end(), r), r);
            const double delta = home_delta + kmeans_cluster_cost(with, records) -
                                 kmeans_cluster_cost(L.members(target), records);
            if (delta >= kImprovementTolerance) continue;
            if (!best || delta < best->delta)
                best = Candidate{Candidate::Kind::Move, home, target, r, delta};
        }
    }
    return best;
}

// Scratch re-evaluation for objectives without an incremental form
// (DBIndex). Candidates on which the objective is undefined are skipped.
std::optional<Candidate> best_recompute(const Clustering& L, const SimilarityGraph& g,
                                        const Snapshot& records, const ObjectiveSpec& spec,
                                        const ClusterFilter& in_scope) {
    double before;
    try {
        before = evaluate(spec, L, g, records);
    } catch (const Error&) {
        return std::nullopt;
    }
    std::optional<Candidate> best;
    auto consider = [&](Candidate cand, const Clustering& after) {
        double score;
        try {
            score = evaluate(spec, after, g, records);
        } catch (const Error&) {
            return;
        }
        cand.delta = score - before;
        if (cand.delta >= kImprovementTolerance) return;
        if (!best || cand.delta < best->delta) best = cand;
    };

    const auto ids = L.cluster_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!allowed(in_scope, ids[i])) continue;
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (!allowed(in_scope, ids[j])) continue;
            Clustering after = L;
            after.merge_clusters(ids[i], ids[j], g);
            consider({Candidate::Kind::Merge, ids[i], ids[j], 0, 0.0}, after);
        }
    }
    for (ObjectId r : L.object_ids()) {
        const ClusterId home = L.cluster_of(r);
        if (!allowed(in_scope, home) || L.members(home).size() < 2) continue;
        {
            Clustering after = L;
            after.split_cluster(home, {r}, g);
            consider({Candidate::Kind::SplitOut, home, 0, r, 0.0}, after);
        }
        for (ClusterId target : ids) {
            if (target == home || !allowed(in_scope, target)) continue;
            Clustering after = L;
            after.move_object(r, target, g);
            consider({Candidate::Kind::Move, home, target, r, 0.0}, after);
        }
    }
    return best;
}

}  // namespace

std::optional<Candidate> best_candidate(const Clustering& L, const SimilarityGraph& g,
                                        const Snapshot& records, const ObjectiveSpec& spec,
                                        const ClusterFilter& in_scope) {
    switch (spec.kind) {
        case ObjectiveKind::Correlation: return best_correlation(L, g, in_scope);
        case ObjectiveKind::KMeans: return best_kmeans(L, records, in_scope);
        case ObjectiveKind::DBIndex: return best_recompute(L, g, records, spec, in_scope);
    }
    return std::nullopt;
}

}  // namespace dyncluster::detail
