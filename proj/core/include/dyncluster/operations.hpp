#pragma once

#include <vector>

#include "dyncluster/record.hpp"
#include "dyncluster/similarity.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

enum class OpKind { Add, Remove, Update };

// One data operation. Add/Update carry the full record; Remove only the id.
struct DataOperation {
    OpKind kind = OpKind::Add;
    ObjectRecord record;

    static DataOperation add(ObjectRecord rec) { return {OpKind::Add, std::move(rec)}; }
    static DataOperation remove(ObjectId id) { return {OpKind::Remove, ObjectRecord{id, {}}}; }
    static DataOperation update(ObjectRecord rec) { return {OpKind::Update, std::move(rec)}; }

    ObjectId id() const { return record.id; }
};

// One workload round. Within a round each id appears in at most one operation.
struct RoundPlan {
    int round = 0;
    std::vector<DataOperation> operations;

    std::vector<ObjectId> touched_ids() const;
    // Throws InvalidArgument when an id appears twice.
    void validate() const;
};

// Applies the operations to the snapshot and maintains the graph
// incrementally: only edges incident to touched ids are recomputed; an
// Update recomputes all edges of the updated id.
void apply_operations(SimilarityGraph& graph, Snapshot& snapshot,
                      const std::vector<DataOperation>& ops, const SimilarityParams& params);

}  // namespace dyncluster
