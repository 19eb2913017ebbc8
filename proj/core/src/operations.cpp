#include "dyncluster/operations.hpp"

#include <set>

#include "dyncluster/error.hpp"

namespace dyncluster {

std::vector<ObjectId> RoundPlan::touched_ids() const {
    std::vector<ObjectId> ids;
    ids.reserve(operations.size());
    for (const auto& op : operations) ids.push_back(op.id());
    return ids;
}

void RoundPlan::validate() const {
    std::set<ObjectId> seen;
    for (const auto& op : operations) {
        if (!seen.insert(op.id()).second)
            fail(ErrorCode::InvalidArgument,
                 "id " + std::to_string(op.id()) + " appears in more than one operation");
    }
}

namespace {

void connect(SimilarityGraph& graph, const Snapshot& snapshot, const ObjectRecord& rec,
             const SimilarityParams& params) {
    for (const auto& [other_id, other] : snapshot) {
        if (other_id == rec.id) continue;
        const double s = record_similarity(rec, other, params);
        if (s >= params.prune_threshold && s > 0.0)
            graph.set_edge(rec.id, other_id, std::min(s, 1.0));
    }
}

}  // namespace

void apply_operations(SimilarityGraph& graph, Snapshot& snapshot,
                      const std::vector<DataOperation>& ops, const SimilarityParams& params) {
    for (const auto& op : ops) {
        const ObjectId id = op.id();
        switch (op.kind) {
            case OpKind::Add: {
                if (snapshot.count(id))
                    fail(ErrorCode::DuplicateId, "add of existing id " + std::to_string(id));
                snapshot[id] = op.record;
                graph.add_node(id);
                connect(graph, snapshot, op.record, params);
                break;
            }
            case OpKind::Remove: {
                if (!snapshot.count(id))
                    fail(ErrorCode::UnknownId, "remove of absent id " + std::to_string(id));
                snapshot.erase(id);
                graph.remove_node(id);
                break;
            }
            case OpKind::Update: {
                if (!snapshot.count(id))
                    fail(ErrorCode::UnknownId, "update of absent id " + std::to_string(id));
                snapshot[id] = op.record;
                graph.clear_edges_of(id);
                connect(graph, snapshot, op.record, params);
                break;
            }
        }
    }
}

}  // namespace dyncluster
