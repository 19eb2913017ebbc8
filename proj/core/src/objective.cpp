#include "dyncluster/objective.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

double pair_count(std::size_t n) {
    return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

// Sum of cross-pair similarity between two disjoint member lists, walking
// the edges of the smaller side.
double cross_similarity(const std::vector<ObjectId>& a, const std::vector<ObjectId>& b,
                        const SimilarityGraph& g) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    double sum = 0.0;
    for (ObjectId m : small) {
        for (const auto& [nb, w] : g.neighbors(m)) {
            if (std::binary_search(large.begin(), large.end(), nb)) sum += w;
        }
    }
    return sum;
}

double kmeans_cluster_cost(const std::vector<ObjectId>& members, const Snapshot& records) {
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

double kmeans_total(const Clustering& clustering, const Snapshot& records) {
    double total = 0.0;
    for (const auto& [c, members] : clustering.clusters())
        total += kmeans_cluster_cost(members, records);
    return std::max(total, 0.0);
}

}  // namespace

ObjectiveSpec parse_objective(const std::string& id) {
    if (id == "correlation") return ObjectiveSpec::correlation();
    if (id == "db-index") return ObjectiveSpec::dbindex();
    if (id.rfind("kmeans:", 0) == 0) {
        const int k = std::stoi(id.substr(7));
        if (k < 1) fail(ErrorCode::InvalidArgument, "kmeans k must be >= 1");
        return ObjectiveSpec::kmeans(k);
    }
    fail(ErrorCode::InvalidArgument, "unknown objective id '" + id + "'");
}

std::string objective_id(const ObjectiveSpec& spec) {
    switch (spec.kind) {
        case ObjectiveKind::Correlation: return "correlation";
        case ObjectiveKind::KMeans: return "kmeans:" + std::to_string(spec.k);
        case ObjectiveKind::DBIndex: return "db-index";
    }
    return "correlation";
}

double intra_similarity(const std::vector<ObjectId>& cluster, const SimilarityGraph& g) {
    if (cluster.empty()) fail(ErrorCode::InvalidArgument, "intra_similarity of empty cluster");
    double sum = 0.0;
    for (ObjectId m : cluster) {
        for (const auto& [nb, w] : g.neighbors(m)) {
            if (nb > m && std::binary_search(cluster.begin(), cluster.end(), nb)) sum += w;
        }
    }
    return sum;
}

double inter_similarity(const std::vector<ObjectId>& a, const std::vector<ObjectId>& b,
                        const SimilarityGraph& g) {
    for (ObjectId m : a) {
        if (std::binary_search(b.begin(), b.end(), m))
            fail(ErrorCode::OverlappingClusters, "object " + std::to_string(m));
    }
    return cross_similarity(a, b, g);
}

double correlation_objective(const Clustering& clustering, const SimilarityGraph& g) {
    // F = sum_C [pairs(C) - intra(C)] + [total_edge_weight - sum_C intra(C)]
    double intra_total = 0.0;
    double intra_pairs = 0.0;
    for (const auto& [c, members] : clustering.clusters()) {
        intra_total += clustering.aggregates(c).intra_sum;
        intra_pairs += pair_count(members.size());
    }
    return (intra_pairs - intra_total) + (g.total_edge_weight() - intra_total);
}

double kmeans_objective(const Clustering& clustering, const Snapshot& records, int k) {
    if (static_cast<int>(clustering.cluster_count()) != k)
        fail(ErrorCode::WrongClusterCount,
             std::to_string(clustering.cluster_count()) + " clusters, expected " +
                 std::to_string(k));
    return kmeans_total(clustering, records);
}

double dbindex_objective(const Clustering& clustering, const SimilarityGraph& g) {
    const auto ids = clustering.cluster_ids();
    const std::size_t n = ids.size();
    if (n < 2) fail(ErrorCode::SingleCluster, "db-index needs at least 2 clusters");

    // Scatter per cluster.
    std::vector<double> scatter(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& members = clustering.members(ids[i]);
        if (members.size() > 1)
            scatter[i] =
                1.0 - clustering.aggregates(ids[i]).intra_sum / pair_count(members.size());
    }

    // Cross-pair similarity sums for connected cluster pairs only; absent
    // pairs have mean dissimilarity exactly 1.
    std::map<ClusterId, std::size_t> index_of;
    for (std::size_t i = 0; i < n; ++i) index_of[ids[i]] = i;
    std::map<std::pair<std::size_t, std::size_t>, double> cross;
    for (std::size_t i = 0; i < n; ++i) {
        for (ObjectId m : clustering.members(ids[i])) {
            for (const auto& [nb, w] : g.neighbors(m)) {
                const std::size_t j = index_of.at(clustering.cluster_of(nb));
                if (j > i) cross[{i, j}] += w;
            }
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
            const auto it = cross.find(key);
            const double pairs = static_cast<double>(clustering.members(ids[i]).size()) *
                                 static_cast<double>(clustering.members(ids[j]).size());
            const double m_ij = 1.0 - (it == cross.end() ? 0.0 : it->second) / pairs;
            if (m_ij <= 0.0)
                fail(ErrorCode::DegenerateSeparation,
                     "clusters " + std::to_string(ids[i]) + " and " + std::to_string(ids[j]) +
                         " have zero mean dissimilarity");
            worst = std::max(worst, (scatter[i] + scatter[j]) / m_ij);
        }
        total += worst;
    }
    return total / static_cast<double>(n);
}

double evaluate(const ObjectiveSpec& spec, const Clustering& clustering,
                const SimilarityGraph& g, const Snapshot& records) {
    switch (spec.kind) {
        case ObjectiveKind::Correlation: return correlation_objective(clustering, g);
        case ObjectiveKind::KMeans: return kmeans_objective(clustering, records, spec.k);
        case ObjectiveKind::DBIndex: return dbindex_objective(clustering, g);
    }
    fail(ErrorCode::InvalidArgument, "unhandled objective kind");
}

namespace {

// Correlation delta of merging: every cross pair flips from an inter term
// (+sim) to an intra term (+1-sim), so delta = pairs - 2 * cross_sim.
double correlation_merge_delta(const Clustering& clustering, const SimilarityGraph& g,
                               ClusterId c1, ClusterId c2) {
    const auto& a = clustering.members(c1);
    const auto& b = clustering.members(c2);
    const double pairs = static_cast<double>(a.size()) * static_cast<double>(b.size());
    return pairs - 2.0 * cross_similarity(a, b, g);
}

double correlation_split_delta(const Clustering& clustering, const SimilarityGraph& g,
                               ObjectId member) {
    const ClusterId c = clustering.cluster_of(member);
    const auto& members = clustering.members(c);
    double to_rest = 0.0;
    for (const auto& [nb, w] : g.neighbors(member)) {
        if (std::binary_search(members.begin(), members.end(), nb)) to_rest += w;
    }
    return 2.0 * to_rest - static_cast<double>(members.size() - 1);
}

// Applies a change to a scratch copy and re-evaluates. KMeans compares raw
// sums of squares because the changed state violates the k precondition.
double recompute_merge_delta(const Clustering& clustering, const SimilarityGraph& g, ClusterId c1,
                             ClusterId c2, const ObjectiveSpec& spec, const Snapshot& records) {
    Clustering after = clustering;
    after.merge_clusters(c1, c2, g);
    if (spec.kind == ObjectiveKind::KMeans)
        return kmeans_total(after, records) - kmeans_total(clustering, records);
    return evaluate(spec, after, g, records) - evaluate(spec, clustering, g, records);
}

double recompute_split_delta(const Clustering& clustering, const SimilarityGraph& g,
                             ObjectId member, const ObjectiveSpec& spec,
                             const Snapshot& records) {
    Clustering after = clustering;
    after.split_cluster(after.cluster_of(member), {member}, g);
    if (spec.kind == ObjectiveKind::KMeans)
        return kmeans_total(after, records) - kmeans_total(clustering, records);
    return evaluate(spec, after, g, records) - evaluate(spec, clustering, g, records);
}

}  // namespace

double delta_if_merged(const Clustering& clustering, const SimilarityGraph& g, ClusterId c1,
                       ClusterId c2, const ObjectiveSpec& spec, const Snapshot& records) {
    if (c1 == c2) fail(ErrorCode::InvalidArgument, "delta_if_merged with c1 == c2");
    if (!clustering.has_cluster(c1)) fail(ErrorCode::UnknownCluster, std::to_string(c1));
    if (!clustering.has_cluster(c2)) fail(ErrorCode::UnknownCluster, std::to_string(c2));
    if (spec.kind == ObjectiveKind::Correlation)
        return correlation_merge_delta(clustering, g, c1, c2);
    return recompute_merge_delta(clustering, g, c1, c2, spec, records);
}

double delta_if_split_out(const Clustering& clustering, const SimilarityGraph& g,
                          ObjectId member, const ObjectiveSpec& spec, const Snapshot& records) {
    const ClusterId c = clustering.cluster_of(member);
    if (clustering.members(c).size() < 2)
        fail(ErrorCode::InvalidArgument, "cannot split a singleton cluster");
    if (spec.kind == ObjectiveKind::Correlation)
        return correlation_split_delta(clustering, g, member);
    return recompute_split_delta(clustering, g, member, spec, records);
}

const std::vector<double>& numeric_vector(const ObjectRecord& rec) {
    if (rec.attributes.size() != 1 || !std::holds_alternative<NumericVector>(rec.attributes[0]))
        fail(ErrorCode::NonNumericData,
             "record " + std::to_string(rec.id) + " is not a single numeric vector");
    return std::get<NumericVector>(rec.attributes[0]).values;
}

}  // namespace dyncluster
