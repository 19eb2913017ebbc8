#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "dyncluster/record.hpp"

namespace dyncluster {

// Sparse symmetric pairwise-similarity graph. An absent edge means
// similarity 0; self-similarity is never stored. Stored values lie in (0,1]:
// edges below the construction-time pruning threshold are simply not added.
class SimilarityGraph {
public:
    using Adjacency = std::map<ObjectId, double>;

    void add_node(ObjectId id);
    void remove_node(ObjectId id);
    bool has_node(ObjectId id) const { return adj_.count(id) != 0; }

    // Sets sim(a,b) = sim(b,a) = value. value must be in (0,1]; a != b.
    void set_edge(ObjectId a, ObjectId b, double value);
    void remove_edge(ObjectId a, ObjectId b);

    // Drops every edge incident to id but keeps the node.
    void clear_edges_of(ObjectId id);

    double similarity(ObjectId a, ObjectId b) const;
    const Adjacency& neighbors(ObjectId id) const;

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    // Sum of all stored edge similarities, each unordered pair once.
    double total_edge_weight() const { return total_weight_; }

    std::vector<ObjectId> node_ids() const;

    // Connected components over stored edges; isolated nodes form their own
    // component. Returns a map id -> component index (dense, deterministic).
    std::map<ObjectId, int> connected_components() const;

    bool operator==(const SimilarityGraph& other) const { return adj_ == other.adj_; }

private:
    std::map<ObjectId, Adjacency> adj_;
    std::size_t edge_count_ = 0;
    double total_weight_ = 0.0;
};

}  // namespace dyncluster
