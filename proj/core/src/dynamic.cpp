#include "dyncluster/dynamic.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "dyncluster/error.hpp"
#include "local_search.hpp"

namespace dyncluster {

namespace {

// Best single-object split on a scratch state; used to pair KMeans merges.
struct ScratchSplit {
    ObjectId object = 0;
    double delta = 0.0;
};

std::optional<ScratchSplit> best_split_anywhere(const Clustering& L, const SimilarityGraph& g,
                                                const Snapshot& records,
                                                const ObjectiveSpec& spec) {
    std::optional<ScratchSplit> best;
    for (ObjectId r : L.object_ids()) {
        if (L.members(L.cluster_of(r)).size() < 2) continue;
        const double delta = delta_if_split_out(L, g, r, spec, records);
        if (!best || delta < best->delta) best = ScratchSplit{r, delta};
    }
    return best;
}

struct ScratchMerge {
    ObjectId rep_a = 0, rep_b = 0;  // representative members
    double delta = 0.0;
};

std::optional<ScratchMerge> best_merge_anywhere(const Clustering& L, const SimilarityGraph& g,
                                                const Snapshot& records,
                                                const ObjectiveSpec& spec) {
    std::optional<ScratchMerge> best;
    const auto ids = L.cluster_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const double delta = delta_if_merged(L, g, ids[i], ids[j], spec, records);
            if (!best || delta < best->delta)
                best = ScratchMerge{L.members(ids[i]).front(), L.members(ids[j]).front(), delta};
        }
    }
    return best;
}

void apply_companions(Clustering& L, const SimilarityGraph& g, const GateDecision& decision) {
    if (decision.companion_split_object) {
        const ObjectId r = *decision.companion_split_object;
        L.split_cluster(L.cluster_of(r), {r}, g);
    }
    if (decision.companion_merge_objects) {
        const auto [u, v] = *decision.companion_merge_objects;
        const ClusterId cu = L.cluster_of(u);
        const ClusterId cv = L.cluster_of(v);
        if (cu != cv) L.merge_clusters(cu, cv, g);
    }
}

}  // namespace

std::optional<GateDecision> ObjectiveGate::check_merge(const Clustering& L, ClusterId a,
                                                       ClusterId b) {
    if (spec_.kind == ObjectiveKind::KMeans) {
        // Preserve k: pair the merge with the best single-object split.
        const double merge_delta = delta_if_merged(L, g_, a, b, spec_, records_);
        Clustering scratch = L;
        scratch.merge_clusters(a, b, g_);
        const auto split = best_split_anywhere(scratch, g_, records_, spec_);
        if (!split) return std::nullopt;
        const double total = merge_delta + split->delta;
        if (total >= kImprovementTolerance) return std::nullopt;
        GateDecision d;
        d.change = {EvolutionKind::Merge, total, true};
        d.companion_split_object = split->object;
        return d;
    }
    double delta;
    try {
        delta = delta_if_merged(L, g_, a, b, spec_, records_);
    } catch (const Error&) {
        return std::nullopt;  // objective undefined on the merged state
    }
    if (delta >= kImprovementTolerance) return std::nullopt;
    return GateDecision{{EvolutionKind::Merge, delta, true}, {}, {}};
}

std::optional<GateDecision> ObjectiveGate::check_split(const Clustering& L, ClusterId c,
                                                       ObjectId out) {
    if (spec_.kind == ObjectiveKind::KMeans) {
        const double split_delta = delta_if_split_out(L, g_, out, spec_, records_);
        Clustering scratch = L;
        scratch.split_cluster(c, {out}, g_);
        const auto merge = best_merge_anywhere(scratch, g_, records_, spec_);
        if (!merge) return std::nullopt;
        const double total = split_delta + merge->delta;
        if (total >= kImprovementTolerance) return std::nullopt;
        GateDecision d;
        d.change = {EvolutionKind::Split, total, true};
        d.companion_merge_objects = {{merge->rep_a, merge->rep_b}};
        return d;
    }
    double delta;
    try {
        delta = delta_if_split_out(L, g_, out, spec_, records_);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (delta >= kImprovementTolerance) return std::nullopt;
    return GateDecision{{EvolutionKind::Split, delta, true}, {}, {}};
}

DbscanGate::DbscanGate(const Snapshot& records, double eps, int min_pts,
                       const std::set<ObjectId>& previous_core)
    : records_(records), eps_(eps), previous_core_(previous_core) {
    current_core_ = dbscan(records, eps, min_pts).core;
}

bool DbscanGate::within_eps(ObjectId a, ObjectId b) const {
    const auto& va = numeric_vector(records_.at(a));
    const auto& vb = numeric_vector(records_.at(b));
    double s = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) s += (va[i] - vb[i]) * (va[i] - vb[i]);
    return s <= eps_ * eps_;
}

bool DbscanGate::stable(const std::vector<ObjectId>& members) const {
    for (ObjectId m : members) {
        if (previous_core_.count(m) && !current_core_.count(m)) return false;
    }
    return true;
}

std::optional<GateDecision> DbscanGate::check_merge(const Clustering& L, ClusterId a,
                                                    ClusterId b) {
    const auto& ma = L.members(a);
    const auto& mb = L.members(b);
    if (!stable(ma) || !stable(mb)) return std::nullopt;
    // Density bridge: an eps-close pair with a core endpoint.
    for (ObjectId p : ma) {
        for (ObjectId q : mb) {
            if ((current_core_.count(p) || current_core_.count(q)) && within_eps(p, q))
                return GateDecision{{EvolutionKind::Merge, 0.0, false}, {}, {}};
        }
    }
    return std::nullopt;
}

std::optional<GateDecision> DbscanGate::check_split(const Clustering& L, ClusterId c,
                                                    ObjectId out) {
    const auto& members = L.members(c);
    if (!stable(members)) return std::nullopt;
    for (ObjectId q : members) {
        if (q == out) continue;
        if ((current_core_.count(q) || current_core_.count(out)) && within_eps(out, q))
            return std::nullopt;  // still density-connected
    }
    return GateDecision{{EvolutionKind::Split, 0.0, false}, {}, {}};
}

Clustering initial_processing(Clustering L, const std::vector<DataOperation>& ops,
                              const SimilarityGraph& g) {
    for (const auto& op : ops) {
        switch (op.kind) {
            case OpKind::Add:
                L.add_singleton(op.id());
                break;
            case OpKind::Remove:
                L.remove_object(op.id(), g);
                break;
            case OpKind::Update:
                // Remove-add sequence: back as a fresh singleton.
                L.remove_object(op.id(), g);
                L.add_singleton(op.id());
                break;
        }
    }
    return L;
}

PassResult merge_pass(Clustering& L, const SimilarityGraph& g, const TrainedModel& merge_model,
                      ChangeGate& gate, const CommitObserver& observer) {
    if (merge_model.kind() != ModelKind::Merge)
        fail(ErrorCode::ArityMismatch, "merge_pass needs a merge model");

    std::deque<ClusterId> queue;
    for (const auto& [c, members] : L.clusters()) {
        const FeatureVector f = extract_features(c, L, g, ModelKind::Merge);
        if (merge_model.predict(f).first == 1) queue.push_back(c);
    }

    PassResult result;
    while (!queue.empty()) {
        const ClusterId c = queue.front();
        queue.pop_front();
        if (!L.has_cluster(c)) continue;

        // Partner minimizing the merged cluster's merge-again probability;
        // the ascending queue makes ties resolve to the smallest id.
        std::optional<ClusterId> partner;
        double best_p = std::numeric_limits<double>::infinity();
        for (ClusterId other : queue) {
            if (!L.has_cluster(other)) continue;
            const double p = merge_probability_after(merge_model, L, g, c, other);
            if (p < best_p) {
                best_p = p;
                partner = other;
            }
        }
        if (!partner) continue;  // nothing left to pair with

        if (auto decision = gate.check_merge(L, c, *partner)) {
            L.merge_clusters(c, *partner, g);
            apply_companions(L, g, *decision);
            queue.erase(std::find(queue.begin(), queue.end(), *partner));
            result.changed = true;
            if (observer) observer(decision->change);
        }
        // Either way c leaves the queue (already popped).
    }
    return result;
}

PassResult split_pass(Clustering& L, const SimilarityGraph& g, const TrainedModel& split_model,
                      ChangeGate& gate, const CommitObserver& observer) {
    if (split_model.kind() != ModelKind::Split)
        fail(ErrorCode::ArityMismatch, "split_pass needs a split model");

    std::deque<ClusterId> queue;
    for (const auto& [c, members] : L.clusters()) {
        const FeatureVector f = extract_features(c, L, g, ModelKind::Split);
        if (split_model.predict(f).first == 1) queue.push_back(c);
    }

    PassResult result;
    while (!queue.empty()) {
        const ClusterId c = queue.front();
        queue.pop_front();
        if (!L.has_cluster(c)) continue;
        const auto& members = L.members(c);
        if (members.size() < 2) continue;

        // Rank members by similarity to the rest of the cluster, most
        // different first (ties by id).
        std::vector<std::pair<double, ObjectId>> ranked;
        ranked.reserve(members.size());
        for (ObjectId r : members) {
            double weight = 0.0;
            for (const auto& [nb, w] : g.neighbors(r)) {
                if (std::binary_search(members.begin(), members.end(), nb)) weight += w;
            }
            ranked.emplace_back(weight, r);
        }
        std::sort(ranked.begin(), ranked.end());

        for (const auto& [weight, r] : ranked) {
            (void)weight;
            if (auto decision = gate.check_split(L, c, r)) {
                L.split_cluster(c, {r}, g);
                apply_companions(L, g, *decision);
                result.changed = true;
                if (observer) observer(decision->change);
                break;  // one object per cluster per pass
            }
        }
    }
    return result;
}

Clustering dynamicc_full(Clustering L, const SimilarityGraph& g, const Snapshot& records,
                         const ObjectiveSpec& spec, const TrainedModel& merge_model,
                         const TrainedModel& split_model, const CommitObserver& observer) {
    ObjectiveGate gate(g, records, spec);
    return dynamicc_full_gated(std::move(L), g, merge_model, split_model, gate, observer);
}

Clustering dynamicc_full_gated(Clustering L, const SimilarityGraph& g,
                               const TrainedModel& merge_model, const TrainedModel& split_model,
                               ChangeGate& gate, const CommitObserver& observer) {
    bool changed = true;
    while (changed) {
        const PassResult merged = merge_pass(L, g, merge_model, gate, observer);
        const PassResult split = split_pass(L, g, split_model, gate, observer);
        changed = merged.changed || split.changed;
    }
    return L;
}

Clustering naive_incremental(Clustering L, const SimilarityGraph& g,
                             const std::vector<DataOperation>& ops, double threshold) {
    auto place = [&](ObjectId id) {
        std::map<ClusterId, double> cross;
        for (const auto& [nb, w] : g.neighbors(id)) {
            if (L.contains_object(nb)) cross[L.cluster_of(nb)] += w;
        }
        std::optional<ClusterId> best;
        double best_avg = threshold;
        for (const auto& [c, sum] : cross) {
            const double avg = sum / static_cast<double>(L.members(c).size());
            if (avg > best_avg) {
                best_avg = avg;
                best = c;
            }
        }
        if (best)
            L.add_to_cluster(id, *best, g);
        else
            L.add_singleton(id);
    };

    for (const auto& op : ops) {
        switch (op.kind) {
            case OpKind::Add:
                place(op.id());
                break;
            case OpKind::Remove:
                L.remove_object(op.id(), g);
                break;
            case OpKind::Update:
                L.remove_object(op.id(), g);
                place(op.id());
                break;
        }
    }
    return L;
}

Clustering greedy_incremental(Clustering L, const SimilarityGraph& g, const Snapshot& records,
                              const ObjectiveSpec& spec, const std::vector<DataOperation>& ops) {
    // Scope seeds: the touched ids plus, for removals and updates, the other
    // members of the cluster they leave.
    std::set<ObjectId> seeds;
    for (const auto& op : ops) {
        if (op.kind == OpKind::Remove || op.kind == OpKind::Update) {
            if (L.contains_object(op.id())) {
                for (ObjectId m : L.members(L.cluster_of(op.id()))) seeds.insert(m);
            }
        }
        seeds.insert(op.id());
    }

    L = initial_processing(std::move(L), ops, g);

    const auto components = g.connected_components();
    std::set<int> touched_components;
    for (ObjectId id : seeds) {
        auto it = components.find(id);
        if (it != components.end()) touched_components.insert(it->second);
    }
    auto in_scope = [&](ClusterId c) {
        for (ObjectId m : L.members(c)) {
            auto it = components.find(m);
            if (it != components.end() && touched_components.count(it->second)) return true;
        }
        return false;
    };

    std::size_t budget = 10 * ops.size();
    while (budget > 0) {
        const auto best = detail::best_candidate(L, g, records, spec, in_scope);
        if (!best) break;
        switch (best->kind) {
            case detail::Candidate::Kind::Merge:
                L.merge_clusters(best->c1, best->c2, g);
                break;
            case detail::Candidate::Kind::SplitOut:
                L.split_cluster(best->c1, {best->object}, g);
                break;
            case detail::Candidate::Kind::Move:
                L.move_object(best->object, best->c2, g);
                break;
        }
        --budget;
    }
    return L;
}

}  // namespace dyncluster
