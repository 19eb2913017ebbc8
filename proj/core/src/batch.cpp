#include "dyncluster/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dyncluster/error.hpp"
#include "local_search.hpp"

namespace dyncluster {

namespace {

void record_merge(EvolutionRecorder* recorder, const Clustering& L, const SimilarityGraph& g,
                  ClusterId a, ClusterId b) {
    if (!recorder) return;
    EvolutionStep step = EvolutionStep::merge(L.members(a), L.members(b), recorder->round());
    step.features = {extract_features(a, L, g, ModelKind::Merge),
                     extract_features(b, L, g, ModelKind::Merge)};
    recorder->record(std::move(step));
}

void record_split(EvolutionRecorder* recorder, const Clustering& L, const SimilarityGraph& g,
                  ClusterId c, ObjectId out) {
    if (!recorder) return;
    std::vector<ObjectId> rest;
    for (ObjectId m : L.members(c))
        if (m != out) rest.push_back(m);
    EvolutionStep step = EvolutionStep::split(L.members(c), {out}, rest, recorder->round());
    step.features = {extract_features(c, L, g, ModelKind::Split)};
    recorder->record(std::move(step));
}

}  // namespace

Clustering hill_climb(const SimilarityGraph& g, const Snapshot& records,
                      const ObjectiveSpec& spec, Clustering init, EvolutionRecorder* recorder) {
    if (spec.kind == ObjectiveKind::KMeans && static_cast<int>(init.cluster_count()) != spec.k)
        fail(ErrorCode::WrongClusterCount, "kmeans hill climb needs exactly k initial clusters");

    Clustering L = std::move(init);
    while (auto best = detail::best_candidate(L, g, records, spec)) {
        switch (best->kind) {
            case detail::Candidate::Kind::Merge:
                record_merge(recorder, L, g, best->c1, best->c2);
                L.merge_clusters(best->c1, best->c2, g);
                break;
            case detail::Candidate::Kind::SplitOut:
                record_split(recorder, L, g, best->c1, best->object);
                L.split_cluster(best->c1, {best->object}, g);
                break;
            case detail::Candidate::Kind::Move: {
                // A move is a split followed by a merge.
                record_split(recorder, L, g, best->c1, best->object);
                const ClusterId fresh = L.split_cluster(best->c1, {best->object}, g);
                record_merge(recorder, L, g, fresh, best->c2);
                L.merge_clusters(fresh, best->c2, g);
                break;
            }
        }
    }
    return L;
}

Clustering kmeans_seed_clustering(const Snapshot& records, int k, Rng& rng,
                                  const SimilarityGraph& g) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
    if (records.size() < static_cast<std::size_t>(k))
        fail(ErrorCode::InvalidArgument, "fewer records than clusters");

    std::vector<ObjectId> ids;
    ids.reserve(records.size());
    for (const auto& [id, _] : records) ids.push_back(id);

    auto dist2 = [&](ObjectId a, ObjectId b) {
        const auto& va = numeric_vector(records.at(a));
        const auto& vb = numeric_vector(records.at(b));
        if (va.size() != vb.size()) fail(ErrorCode::DimensionMismatch, "ragged numeric records");
        double s = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) s += (va[i] - vb[i]) * (va[i] - vb[i]);
        return s;
    };

    std::vector<ObjectId> seeds{ids[rng.uniform_u64(ids.size())]};
    while (static_cast<int>(seeds.size()) < k) {
        ObjectId far = ids[0];
        double far_d = -1.0;
        for (ObjectId id : ids) {
            double nearest = std::numeric_limits<double>::infinity();
            for (ObjectId s : seeds) nearest = std::min(nearest, dist2(id, s));
            if (nearest > far_d) {
                far_d = nearest;
                far = id;
            }
        }
        seeds.push_back(far);
    }

    std::map<ClusterId, std::vector<ObjectId>> clusters;
    for (ObjectId id : ids) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const double d = dist2(id, seeds[s]);
            if (d < best_d) {
                best_d = d;
                best = s;
            }
        }
        clusters[static_cast<ClusterId>(best + 1)].push_back(id);
    }
    return Clustering::from_clusters(clusters, g);
}

DbscanResult dbscan(const Snapshot& records, double eps, int min_pts) {
    if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be > 0");
    if (min_pts < 1) fail(ErrorCode::InvalidArgument, "min_pts must be >= 1");
    for (const auto& [id, rec] : records) numeric_vector(rec);  // NonNumericData check

    std::vector<ObjectId> ids;
    ids.reserve(records.size());
    for (const auto& [id, _] : records) ids.push_back(id);

    const double eps2 = eps * eps;
    auto within = [&](ObjectId a, ObjectId b) {
        const auto& va = numeric_vector(records.at(a));
        const auto& vb = numeric_vector(records.at(b));
        if (va.size() != vb.size()) fail(ErrorCode::DimensionMismatch, "ragged numeric records");
        double s = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) {
            s += (va[i] - vb[i]) * (va[i] - vb[i]);
            if (s > eps2) return false;
        }
        return true;
    };

    std::map<ObjectId, std::vector<ObjectId>> neighborhoods;
    for (ObjectId a : ids) neighborhoods[a].push_back(a);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (within(ids[i], ids[j])) {
                neighborhoods[ids[i]].push_back(ids[j]);
                neighborhoods[ids[j]].push_back(ids[i]);
            }
        }
    }

    DbscanResult result;
    for (ObjectId id : ids) {
        if (neighborhoods[id].size() >= static_cast<std::size_t>(min_pts)) result.core.insert(id);
    }

    std::map<ObjectId, ClusterId> assigned;
    std::map<ClusterId, std::vector<ObjectId>> clusters;
    ClusterId next = 1;
    for (ObjectId id : ids) {
        if (!result.core.count(id) || assigned.count(id)) continue;
        const ClusterId c = next++;
        std::vector<ObjectId> frontier{id};
        assigned[id] = c;
        clusters[c].push_back(id);
        while (!frontier.empty()) {
            const ObjectId cur = frontier.back();
            frontier.pop_back();
            if (!result.core.count(cur)) continue;  // border points do not expand
            for (ObjectId nb : neighborhoods[cur]) {
                if (assigned.count(nb)) continue;
                assigned[nb] = c;
                clusters[c].push_back(nb);
                frontier.push_back(nb);
            }
        }
    }
    for (ObjectId id : ids) {
        if (!assigned.count(id)) clusters[next++] = {id};  // noise as singleton
    }

    SimilarityGraph dummy;
    result.clustering = Clustering::from_clusters(clusters, dummy);
    return result;
}

}  // namespace dyncluster
