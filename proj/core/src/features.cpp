#include "dyncluster/features.hpp"

#include <algorithm>
#include <map>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

double pair_count(std::size_t n) {
    return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

// Maximal average inter-similarity from `members` to any cluster not in
// `excluded`, plus the size of the attaining cluster. Only edge-connected
// clusters can have positive averages; ties and the all-zero case resolve to
// the smallest eligible cluster id, fixed at size 1 when nothing is eligible.
void max_avg_inter(const std::vector<ObjectId>& members, const Clustering& clustering,
                   const SimilarityGraph& g, const std::vector<ClusterId>& excluded,
                   double* best_avg, double* best_size) {
    std::map<ClusterId, double> cross;
    for (ObjectId m : members) {
        for (const auto& [nb, w] : g.neighbors(m)) {
            if (std::binary_search(members.begin(), members.end(), nb)) continue;
            if (!clustering.contains_object(nb)) continue;  // outside this universe
            const ClusterId other = clustering.cluster_of(nb);
            if (std::find(excluded.begin(), excluded.end(), other) != excluded.end()) continue;
            cross[other] += w;
        }
    }
    *best_avg = 0.0;
    *best_size = 1.0;
    bool found = false;
    for (const auto& [c, sum] : cross) {
        const double size = static_cast<double>(clustering.members(c).size());
        const double avg = sum / (static_cast<double>(members.size()) * size);
        if (!found || avg > *best_avg) {
            found = true;
            *best_avg = avg;
            *best_size = size;
        }
    }
    if (found) return;
    // No connected cluster: the maximum over averages is 0, attained by the
    // smallest-id other cluster when one exists.
    for (const auto& [c, mem] : clustering.clusters()) {
        if (std::find(excluded.begin(), excluded.end(), c) != excluded.end()) continue;
        *best_size = static_cast<double>(mem.size());
        return;
    }
}

}  // namespace

FeatureVector extract_features(ClusterId cluster, const Clustering& clustering,
                               const SimilarityGraph& g, ModelKind kind) {
    if (!clustering.has_cluster(cluster))
        fail(ErrorCode::UnknownCluster, std::to_string(cluster));
    const auto& members = clustering.members(cluster);
    FeatureVector f;
    f.kind = kind;
    f.d3 = static_cast<double>(members.size());
    if (members.size() > 1)
        f.d1 = clustering.aggregates(cluster).intra_sum / pair_count(members.size());
    max_avg_inter(members, clustering, g, {cluster}, &f.d2, &f.d4);
    if (kind == ModelKind::Split) f.d4 = 1.0;
    return f;
}

FeatureVector features_of_merged(ClusterId c1, ClusterId c2, const Clustering& clustering,
                                 const SimilarityGraph& g, ModelKind kind) {
    if (c1 == c2) fail(ErrorCode::InvalidArgument, "features_of_merged with c1 == c2");
    const auto& a = clustering.members(c1);
    const auto& b = clustering.members(c2);

    std::vector<ObjectId> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));

    double cross = 0.0;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (ObjectId m : small) {
        for (const auto& [nb, w] : g.neighbors(m)) {
            if (std::binary_search(large.begin(), large.end(), nb)) cross += w;
        }
    }

    FeatureVector f;
    f.kind = kind;
    f.d3 = static_cast<double>(merged.size());
    const double intra =
        clustering.aggregates(c1).intra_sum + clustering.aggregates(c2).intra_sum + cross;
    if (merged.size() > 1) f.d1 = intra / pair_count(merged.size());
    max_avg_inter(merged, clustering, g, {c1, c2}, &f.d2, &f.d4);
    if (kind == ModelKind::Split) f.d4 = 1.0;
    return f;
}

}  // namespace dyncluster
