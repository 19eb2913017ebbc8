#include "dyncluster/clustering.hpp"

#include <algorithm>

#include "dyncluster/error.hpp"

namespace dyncluster {

Clustering Clustering::singletons(const std::vector<ObjectId>& ids) {
    Clustering out;
    for (ObjectId id : ids) out.add_singleton(id);
    return out;
}

ClusterId Clustering::add_singleton(ObjectId id) {
    if (assignment_.count(id))
        fail(ErrorCode::DuplicateId, "object " + std::to_string(id) + " already clustered");
    ClusterId c = allocate_id();
    assignment_[id] = c;
    clusters_[c] = {id};
    aggregates_[c] = {};
    return c;
}

void Clustering::add_to_cluster(ObjectId id, ClusterId cluster, const SimilarityGraph& g) {
    if (assignment_.count(id))
        fail(ErrorCode::DuplicateId, "object " + std::to_string(id) + " already clustered");
    auto it = clusters_.find(cluster);
    if (it == clusters_.end())
        fail(ErrorCode::UnknownCluster, "cluster " + std::to_string(cluster));
    double gained = 0.0;
    for (ObjectId m : it->second) gained += g.similarity(id, m);
    insert_member(cluster, id);
    assignment_[id] = cluster;
    aggregates_[cluster].intra_sum += gained;
}

void Clustering::remove_object(ObjectId id, const SimilarityGraph& g) {
    auto it = assignment_.find(id);
    if (it == assignment_.end())
        fail(ErrorCode::UnknownId, "object " + std::to_string(id));
    ClusterId c = it->second;
    auto& mem = clusters_[c];
    double lost = 0.0;
    for (ObjectId m : mem)
        if (m != id) lost += g.similarity(id, m);
    mem.erase(std::lower_bound(mem.begin(), mem.end(), id));
    assignment_.erase(it);
    if (mem.empty()) {
        clusters_.erase(c);
        aggregates_.erase(c);
    } else {
        aggregates_[c].intra_sum -= lost;
    }
}

ClusterId Clustering::merge_clusters(ClusterId a, ClusterId b, const SimilarityGraph& g) {
    if (a == b) fail(ErrorCode::InvalidArgument, "merging a cluster with itself");
    auto ita = clusters_.find(a);
    auto itb = clusters_.find(b);
    if (ita == clusters_.end()) fail(ErrorCode::UnknownCluster, std::to_string(a));
    if (itb == clusters_.end()) fail(ErrorCode::UnknownCluster, std::to_string(b));

    double cross = 0.0;
    const auto& small = ita->second.size() <= itb->second.size() ? ita->second : itb->second;
    const auto& large = ita->second.size() <= itb->second.size() ? itb->second : ita->second;
    for (ObjectId m : small) {
        for (const auto& [nb, w] : g.neighbors(m)) {
            if (std::binary_search(large.begin(), large.end(), nb)) cross += w;
        }
    }

    ClusterId merged = allocate_id();
    std::vector<ObjectId> members;
    members.reserve(ita->second.size() + itb->second.size());
    std::merge(ita->second.begin(), ita->second.end(), itb->second.begin(), itb->second.end(),
               std::back_inserter(members));
    for (ObjectId m : members) assignment_[m] = merged;
    aggregates_[merged].intra_sum =
        aggregates_[a].intra_sum + aggregates_[b].intra_sum + cross;
    clusters_[merged] = std::move(members);
    clusters_.erase(a);
    clusters_.erase(b);
    aggregates_.erase(a);
    aggregates_.erase(b);
    return merged;
}

ClusterId Clustering::split_cluster(ClusterId cluster, const std::vector<ObjectId>& part,
                                    const SimilarityGraph& g) {
    auto it = clusters_.find(cluster);
    if (it == clusters_.end()) fail(ErrorCode::UnknownCluster, std::to_string(cluster));
    if (part.empty() || part.size() >= it->second.size())
        fail(ErrorCode::InvalidArgument, "split part must be a proper non-empty subset");

    std::vector<ObjectId> carved(part.begin(), part.end());
    std::sort(carved.begin(), carved.end());
    for (ObjectId m : carved) {
        if (!std::binary_search(it->second.begin(), it->second.end(), m))
            fail(ErrorCode::UnknownId,
                 "object " + std::to_string(m) + " not in cluster " + std::to_string(cluster));
    }

    std::vector<ObjectId> rest;
    rest.reserve(it->second.size() - carved.size());
    std::set_difference(it->second.begin(), it->second.end(), carved.begin(), carved.end(),
                        std::back_inserter(rest));

    double carved_intra = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < carved.size(); ++i) {
        for (const auto& [nb, w] : g.neighbors(carved[i])) {
            if (std::binary_search(rest.begin(), rest.end(), nb)) cross += w;
            if (nb > carved[i] && std::binary_search(carved.begin(), carved.end(), nb))
                carved_intra += w;
        }
    }

    ClusterId fresh = allocate_id();
    for (ObjectId m : carved) assignment_[m] = fresh;
    aggregates_[fresh].intra_sum = carved_intra;
    aggregates_[cluster].intra_sum -= carved_intra + cross;
    clusters_[fresh] = std::move(carved);
    it->second = std::move(rest);
    return fresh;
}

void Clustering::move_object(ObjectId id, ClusterId target, const SimilarityGraph& g) {
    auto it = assignment_.find(id);
    if (it == assignment_.end()) fail(ErrorCode::UnknownId, std::to_string(id));
    if (!clusters_.count(target)) fail(ErrorCode::UnknownCluster, std::to_string(target));
    if (it->second == target) return;
    remove_object(id, g);
    add_to_cluster(id, target, g);
}

ClusterId Clustering::cluster_of(ObjectId id) const {
    auto it = assignment_.find(id);
    if (it == assignment_.end()) fail(ErrorCode::UnknownId, std::to_string(id));
    return it->second;
}

const std::vector<ObjectId>& Clustering::members(ClusterId c) const {
    auto it = clusters_.find(c);
    if (it == clusters_.end()) fail(ErrorCode::UnknownCluster, std::to_string(c));
    return it->second;
}

const Clustering::ClusterAggregates& Clustering::aggregates(ClusterId c) const {
    auto it = aggregates_.find(c);
    if (it == aggregates_.end()) fail(ErrorCode::UnknownCluster, std::to_string(c));
    return it->second;
}

std::vector<ClusterId> Clustering::cluster_ids() const {
    std::vector<ClusterId> ids;
    ids.reserve(clusters_.size());
    for (const auto& [c, _] : clusters_) ids.push_back(c);
    return ids;
}

std::vector<ObjectId> Clustering::object_ids() const {
    std::vector<ObjectId> ids;
    ids.reserve(assignment_.size());
    for (const auto& [id, _] : assignment_) ids.push_back(id);
    return ids;
}

std::vector<std::vector<ObjectId>> Clustering::canonical_clusters() const {
    std::vector<std::vector<ObjectId>> out;
    out.reserve(clusters_.size());
    for (const auto& [c, members] : clusters_) out.push_back(members);
    std::sort(out.begin(), out.end());
    return out;
}

bool Clustering::same_partition(const Clustering& other) const {
    return canonical_clusters() == other.canonical_clusters();
}

void Clustering::set_next_cluster_id(ClusterId next) {
    if (next <= 0 || (!clusters_.empty() && next <= clusters_.rbegin()->first))
        fail(ErrorCode::InvalidArgument, "next cluster id must exceed all existing ids");
    next_cluster_id_ = next;
}

void Clustering::refresh_aggregates(const SimilarityGraph& g) {
    for (const auto& [c, members] : clusters_) {
        double intra = 0.0;
        for (ObjectId m : members) {
            for (const auto& [nb, w] : g.neighbors(m)) {
                if (nb > m && std::binary_search(members.begin(), members.end(), nb)) intra += w;
            }
        }
        aggregates_[c].intra_sum = intra;
    }
}

Clustering Clustering::from_clusters(const std::map<ClusterId, std::vector<ObjectId>>& clusters,
                                     const SimilarityGraph& g) {
    Clustering out;
    for (const auto& [c, members] : clusters) {
        if (c <= 0) fail(ErrorCode::InvalidArgument, "cluster ids must be positive");
        if (members.empty()) fail(ErrorCode::InvalidArgument, "empty cluster " + std::to_string(c));
        std::vector<ObjectId> sorted = members;
        std::sort(sorted.begin(), sorted.end());
        double intra = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
            for (std::size_t j = i + 1; j < sorted.size(); ++j)
                intra += g.similarity(sorted[i], sorted[j]);
        for (ObjectId m : sorted) {
            if (out.assignment_.count(m))
                fail(ErrorCode::OverlappingClusters, "object " + std::to_string(m));
            out.assignment_[m] = c;
        }
        out.clusters_[c] = std::move(sorted);
        out.aggregates_[c].intra_sum = intra;
        out.next_cluster_id_ = std::max(out.next_cluster_id_, c + 1);
    }
    return out;
}

void Clustering::insert_member(ClusterId c, ObjectId id) {
    auto& mem = clusters_[c];
    mem.insert(std::upper_bound(mem.begin(), mem.end(), id), id);
}

}  // namespace dyncluster
