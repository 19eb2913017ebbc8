#include "dyncluster/similarity_graph.hpp"

#include <cassert>

#include "dyncluster/error.hpp"

namespace dyncluster {

void SimilarityGraph::add_node(ObjectId id) {
    adj_.try_emplace(id);
}

void SimilarityGraph::remove_node(ObjectId id) {
    clear_edges_of(id);
    adj_.erase(id);
}

void SimilarityGraph::set_edge(ObjectId a, ObjectId b, double value) {
    if (a == b) fail(ErrorCode::InvalidArgument, "self-edge on id " + std::to_string(a));
    if (!(value > 0.0) || value > 1.0)
        fail(ErrorCode::InvalidArgument, "edge similarity out of (0,1]");
    add_node(a);
    add_node(b);
    auto [it, inserted] = adj_[a].insert_or_assign(b, value);
    (void)it;
    if (inserted) {
        ++edge_count_;
    } else {
        total_weight_ -= adj_[b][a];
    }
    adj_[b][a] = value;
    total_weight_ += value;
}

void SimilarityGraph::remove_edge(ObjectId a, ObjectId b) {
    auto it = adj_.find(a);
    if (it == adj_.end()) return;
    auto eit = it->second.find(b);
    if (eit == it->second.end()) return;
    total_weight_ -= eit->second;
    --edge_count_;
    it->second.erase(eit);
    adj_[b].erase(a);
}

void SimilarityGraph::clear_edges_of(ObjectId id) {
    auto it = adj_.find(id);
    if (it == adj_.end()) return;
    for (const auto& [nb, w] : it->second) {
        total_weight_ -= w;
        --edge_count_;
        adj_[nb].erase(id);
    }
    it->second.clear();
}

double SimilarityGraph::similarity(ObjectId a, ObjectId b) const {
    if (a == b) return 1.0;
    auto it = adj_.find(a);
    if (it == adj_.end()) return 0.0;
    auto eit = it->second.find(b);
    return eit == it->second.end() ? 0.0 : eit->second;
}

const SimilarityGraph::Adjacency& SimilarityGraph::neighbors(ObjectId id) const {
    static const Adjacency empty;
    auto it = adj_.find(id);
    return it == adj_.end() ? empty : it->second;
}

std::vector<ObjectId> SimilarityGraph::node_ids() const {
    std::vector<ObjectId> ids;
    ids.reserve(adj_.size());
    for (const auto& [id, _] : adj_) ids.push_back(id);
    return ids;
}

std::map<ObjectId, int> SimilarityGraph::connected_components() const {
    std::map<ObjectId, int> comp;
    int next = 0;
    for (const auto& [id, _] : adj_) {
        if (comp.count(id)) continue;
        // BFS from id.
        std::vector<ObjectId> stack{id};
        comp[id] = next;
        while (!stack.empty()) {
            ObjectId cur = stack.back();
            stack.pop_back();
            for (const auto& [nb, w] : adj_.at(cur)) {
                (void)w;
                if (!comp.count(nb)) {
                    comp[nb] = next;
                    stack.push_back(nb);
                }
            }
        }
        ++next;
    }
    return comp;
}

}  // namespace dyncluster
