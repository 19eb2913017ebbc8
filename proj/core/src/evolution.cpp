#include "dyncluster/evolution.hpp"

#include <algorithm>
#include <map>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

std::vector<ObjectId> sorted(std::vector<ObjectId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<ObjectId> set_union_of(const std::vector<ObjectId>& a,
                                   const std::vector<ObjectId>& b) {
    std::vector<ObjectId> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool disjoint(const std::vector<ObjectId>& a, const std::vector<ObjectId>& b) {
    for (ObjectId m : a)
        if (std::binary_search(b.begin(), b.end(), m)) return false;
    return true;
}

// Locates the cluster whose member set equals `members`; 0 when absent.
ClusterId find_cluster(const Clustering& clustering, const std::vector<ObjectId>& members) {
    if (members.empty()) return 0;
    if (!clustering.contains_object(members.front())) return 0;
    const ClusterId c = clustering.cluster_of(members.front());
    return clustering.members(c) == members ? c : 0;
}

}  // namespace

EvolutionStep EvolutionStep::merge(std::vector<ObjectId> a, std::vector<ObjectId> b, int round) {
    EvolutionStep s;
    s.kind = EvolutionKind::Merge;
    s.inputs = {sorted(std::move(a)), sorted(std::move(b))};
    s.outputs = {set_union_of(s.inputs[0], s.inputs[1])};
    s.round = round;
    s.validate();
    return s;
}

EvolutionStep EvolutionStep::split(std::vector<ObjectId> from, std::vector<ObjectId> part_a,
                                   std::vector<ObjectId> part_b, int round) {
    EvolutionStep s;
    s.kind = EvolutionKind::Split;
    s.inputs = {sorted(std::move(from))};
    s.outputs = {sorted(std::move(part_a)), sorted(std::move(part_b))};
    s.round = round;
    s.validate();
    return s;
}

void EvolutionStep::validate() const {
    if (kind == EvolutionKind::Merge) {
        if (inputs.size() != 2 || outputs.size() != 1 || inputs[0].empty() || inputs[1].empty())
            fail(ErrorCode::InconsistentPartitions, "merge step needs two non-empty inputs");
        if (!disjoint(inputs[0], inputs[1]))
            fail(ErrorCode::InconsistentPartitions, "merge inputs overlap");
        if (outputs[0] != set_union_of(inputs[0], inputs[1]))
            fail(ErrorCode::InconsistentPartitions, "merge output is not the input union");
    } else {
        if (inputs.size() != 1 || outputs.size() != 2 || outputs[0].empty() || outputs[1].empty())
            fail(ErrorCode::InconsistentPartitions, "split step needs two non-empty outputs");
        if (!disjoint(outputs[0], outputs[1]))
            fail(ErrorCode::InconsistentPartitions, "split outputs overlap");
        if (set_union_of(outputs[0], outputs[1]) != inputs[0])
            fail(ErrorCode::InconsistentPartitions, "split outputs do not partition the input");
    }
}

void EvolutionRecorder::record(EvolutionStep step) {
    step.round = round_;
    step.validate();
    steps_.push_back(std::move(step));
}

void record_step(EvolutionRecorder& recorder, EvolutionStep step) {
    recorder.record(std::move(step));
}

std::vector<EvolutionStep> decompose_multiway(const std::vector<std::vector<ObjectId>>& clusters,
                                              int round) {
    if (clusters.size() < 2)
        fail(ErrorCode::InvalidArgument, "multiway merge needs at least 2 clusters");
    std::vector<std::vector<ObjectId>> parts;
    parts.reserve(clusters.size());
    for (const auto& c : clusters) {
        if (c.empty()) fail(ErrorCode::InvalidArgument, "empty cluster in multiway merge");
        parts.push_back(sorted(c));
    }
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<EvolutionStep> steps;
    std::vector<ObjectId> acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        steps.push_back(EvolutionStep::merge(acc, parts[i], round));
        acc = steps.back().outputs[0];
    }
    return steps;
}

void replay(Clustering& clustering, const TransformationList& list, const SimilarityGraph& g) {
    for (const auto& step : list) {
        step.validate();
        if (step.kind == EvolutionKind::Merge) {
            const ClusterId a = find_cluster(clustering, step.inputs[0]);
            const ClusterId b = find_cluster(clustering, step.inputs[1]);
            if (a == 0 || b == 0)
                fail(ErrorCode::InconsistentPartitions, "merge input cluster not present");
            clustering.merge_clusters(a, b, g);
        } else {
            const ClusterId c = find_cluster(clustering, step.inputs[0]);
            if (c == 0)
                fail(ErrorCode::InconsistentPartitions, "split input cluster not present");
            clustering.split_cluster(c, step.outputs[0], g);
        }
    }
}

TransformationList derive_cross_round(const Clustering& old_clustering,
                                      const Clustering& new_clustering,
                                      const std::set<ObjectId>& touched,
                                      const SimilarityGraph& g, int round) {
    // Start state: old clustering restricted to surviving ids, added ids as
    // singleton clusters.
    Clustering state = old_clustering;
    for (ObjectId id : old_clustering.object_ids()) {
        if (!new_clustering.contains_object(id)) {
            if (!touched.count(id))
                fail(ErrorCode::InconsistentPartitions,
                     "id " + std::to_string(id) + " vanished but is not touched");
            state.remove_object(id, g);
        }
    }
    for (ObjectId id : new_clustering.object_ids()) {
        if (!state.contains_object(id)) {
            if (!touched.count(id))
                fail(ErrorCode::InconsistentPartitions,
                     "id " + std::to_string(id) + " appeared but is not touched");
            state.add_singleton(id);
        }
    }

    TransformationList list;

    // Materialize each target cluster that the current state lacks: carve the
    // needed fragment out of every overlapping cluster, then fold the
    // fragments together in ascending cluster-id order. A target that already
    // exists needs no change.
    for (const auto& [target_id, target] : new_clustering.clusters()) {
        if (find_cluster(state, target) != 0) continue;

        std::vector<ClusterId> overlapping;
        for (ObjectId m : target) {
            const ClusterId c = state.cluster_of(m);
            if (std::find(overlapping.begin(), overlapping.end(), c) == overlapping.end())
                overlapping.push_back(c);
        }
        std::sort(overlapping.begin(), overlapping.end());

        std::vector<ClusterId> fragments;
        for (ClusterId c : overlapping) {
            const auto& members = state.members(c);
            std::vector<ObjectId> inside, outside;
            for (ObjectId m : members) {
                (std::binary_search(target.begin(), target.end(), m) ? inside : outside)
                    .push_back(m);
            }
            if (outside.empty()) {
                // Fully contained: splitting off an empty remainder is a no-op.
                fragments.push_back(c);
                continue;
            }
            EvolutionStep step = EvolutionStep::split(members, inside, outside, round);
            step.features = {extract_features(c, state, g, ModelKind::Split)};
            list.push_back(step);
            fragments.push_back(state.split_cluster(c, inside, g));
        }

        ClusterId acc = fragments.front();
        for (std::size_t i = 1; i < fragments.size(); ++i) {
            EvolutionStep step =
                EvolutionStep::merge(state.members(acc), state.members(fragments[i]), round);
            step.features = {extract_features(acc, state, g, ModelKind::Merge),
                             extract_features(fragments[i], state, g, ModelKind::Merge)};
            list.push_back(step);
            acc = state.merge_clusters(acc, fragments[i], g);
        }
    }

    if (!state.same_partition(new_clustering))
        fail(ErrorCode::InconsistentPartitions, "derived list does not replay to the target");
    return list;
}

}  // namespace dyncluster
