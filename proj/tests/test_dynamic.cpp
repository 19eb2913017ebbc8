#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dyncluster/dynamic.hpp"
#include "dyncluster/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dyncluster;
namespace dt = dyncluster::testing;

namespace {

Snapshot numeric_snapshot(const std::vector<std::vector<double>>& points) {
    Snapshot out;
    ObjectId id = 1;
    for (const auto& p : points) out[id] = ObjectRecord{id, {NumericVector{p}}}, ++id;
    return out;
}

TrainedModel always_negative(ModelKind kind) {
    return TrainedModel::from_parameters(
        kind, std::vector<double>(kind == ModelKind::Merge ? 4 : 3, 0.0), -37.0,
        FeatureNormalization{}, 0.5);
}

// Test-side reimplementation of the alternating pass semantics over plain
// member sets with brute-force objective arithmetic, for a model that
// predicts 1 everywhere (constant probability, so the argmin partner is the
// first remaining queue entry). Mirrors the production id discipline:
// clusters are ordered by creation, merges create new entries, a split's
// remainder keeps its slot.
std::vector<std::set<ObjectId>> pass_semantics_oracle(const Clustering& L,
                                                      const SimilarityGraph& g) {
    std::vector<std::set<ObjectId>> clusters;
    for (const auto& [c, members] : L.clusters())
        clusters.emplace_back(members.begin(), members.end());

    auto merge_delta = [&](const std::set<ObjectId>& a, const std::set<ObjectId>& b) {
        double delta = 0.0;
        for (ObjectId x : a)
            for (ObjectId y : b) delta += 1.0 - 2.0 * g.similarity(x, y);
        return delta;
    };
    auto split_delta = [&](const std::set<ObjectId>& c, ObjectId r) {
        double delta = 0.0;
        for (ObjectId y : c)
            if (y != r) delta += 2.0 * g.similarity(r, y) - 1.0;
        return delta;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // merge pass: FIFO over current clusters in slot order
        std::vector<std::size_t> queue;
        for (std::size_t i = 0; i < clusters.size(); ++i) queue.push_back(i);
        while (!queue.empty()) {
            const std::size_t c = queue.front();
            queue.erase(queue.begin());
            if (queue.empty()) continue;
            const std::size_t partner = queue.front();  // constant probability
            if (merge_delta(clusters[c], clusters[partner]) < -1e-12) {
                std::set<ObjectId> merged = clusters[c];
                merged.insert(clusters[partner].begin(), clusters[partner].end());
                queue.erase(std::find(queue.begin(), queue.end(), partner));
                // erase higher slot first
                clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(
                                                      std::max(c, partner)));
                clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(c, partner)));
                // re-point queue slots after erasures
                for (auto& slot : queue) {
                    if (slot > std::max(c, partner)) slot -= 2;
                    else if (slot > std::min(c, partner)) slot -= 1;
                }
                clusters.push_back(std::move(merged));
                changed = true;
            }
        }
        // split pass: each cluster in slot order, most-different member first
        const std::size_t count = clusters.size();
        for (std::size_t i = 0; i < count; ++i) {
            auto& c = clusters[i];
            if (c.size() < 2) continue;
            std::vector<std::pair<double, ObjectId>> ranked;
            for (ObjectId r : c) {
                double w = 0.0;
                for (ObjectId y : c)
                    if (y != r) w += g.similarity(r, y);
                ranked.emplace_back(w, r);
            }
            std::sort(ranked.begin(), ranked.end());
            for (const auto& [w, r] : ranked) {
                (void)w;
                if (split_delta(c, r) < -1e-12) {
                    c.erase(r);
                    clusters.push_back({r});
                    changed = true;
                    break;
                }
            }
        }
    }
    return clusters;
}

}  // namespace

TEST_CASE("initial processing handles add, remove, update") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering old_clustering = dt::example1_old_clustering(g);

    // add r6, r7
    Clustering with_adds = initial_processing(
        old_clustering, {DataOperation::add(ObjectRecord{6, {}}),
                         DataOperation::add(ObjectRecord{7, {}})}, g);
    CHECK(with_adds.cluster_count() == 4);
    CHECK(with_adds.members(with_adds.cluster_of(6)) == std::vector<ObjectId>{6});
    CHECK(with_adds.members(with_adds.cluster_of(7)) == std::vector<ObjectId>{7});

    // removing the only member drops the cluster
    Clustering tiny = Clustering::from_clusters({{1, {1}}, {2, {2, 3}}}, g);
    Clustering after = initial_processing(tiny, {DataOperation::remove(1)}, g);
    CHECK(after.cluster_count() == 1);
    CHECK(!after.contains_object(1));

    // update == remove then add under the same id
    Clustering u1 = initial_processing(
        old_clustering, {DataOperation::update(ObjectRecord{2, {}})}, g);
    Clustering u2 = initial_processing(
        old_clustering, {DataOperation::remove(2)}, g);
    u2 = initial_processing(u2, {DataOperation::add(ObjectRecord{2, {}})}, g);
    CHECK(u1.same_partition(u2));

    CHECK_THROWS_AS(initial_processing(old_clustering, {DataOperation::remove(99)}, g), Error);
}

TEST_CASE("merge_pass: all-negative model commits nothing") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering L = dt::example1_old_clustering(g);
    ObjectiveGate gate(g, {}, ObjectiveSpec::correlation());
    const Clustering before = L;
    const PassResult r = merge_pass(L, g, always_negative(ModelKind::Merge), gate);
    CHECK(!r.changed);
    CHECK(L.same_partition(before));
}

TEST_CASE("merge_pass on the walkthrough commits the verified merges") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering L = dt::example1_old_clustering(g);
    L = initial_processing(L, {DataOperation::add(ObjectRecord{6, {}}),
                               DataOperation::add(ObjectRecord{7, {}})}, g);
    ObjectiveGate gate(g, {}, ObjectiveSpec::correlation());

    std::vector<double> deltas;
    const PassResult r =
        merge_pass(L, g, dt::stub_merge_model(), gate,
                   [&](const CommittedChange& c) { deltas.push_back(c.delta); });
    CHECK(r.changed);
    // first pass: C2 + r6 at delta -1; r7's best partner C1 fails the gate
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0] == doctest::Approx(-1.0));
    CHECK(L.cluster_of(6) == L.cluster_of(4));
    CHECK(L.cluster_of(7) != L.cluster_of(1));
}

TEST_CASE("split_pass: singleton prediction cannot split") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering L = Clustering::singletons({1, 2, 3, 4, 5, 6, 7});
    ObjectiveGate gate(g, {}, ObjectiveSpec::correlation());
    const PassResult r = split_pass(L, g, dt::stub_split_model(), gate);
    CHECK(!r.changed);
    CHECK(L.cluster_count() == 7);
}

TEST_CASE("split_pass carves r1 out of C1 in the walkthrough state") {
    const SimilarityGraph g = dt::example1_graph();
    // state after the first merge pass: {C1, {r4,r5,r6}, {r7}}
    Clustering L = Clustering::from_clusters(
        {{1, {1, 2, 3}}, {2, {4, 5, 6}}, {3, {7}}}, g);
    ObjectiveGate gate(g, {}, ObjectiveSpec::correlation());

    std::vector<double> deltas;
    const PassResult r =
        split_pass(L, g, dt::stub_split_model(), gate,
                   [&](const CommittedChange& c) { deltas.push_back(c.delta); });
    CHECK(r.changed);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0] == doctest::Approx(-0.2));
    CHECK(L.members(L.cluster_of(1)) == std::vector<ObjectId>{1});
    CHECK(L.members(L.cluster_of(2)) == std::vector<ObjectId>{2, 3});
    // {r4,r5,r6} has no improving single-object split
    CHECK(L.members(L.cluster_of(4)) == std::vector<ObjectId>{4, 5, 6});
}

TEST_CASE("split_pass matches brute force when no split improves") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const SimilarityGraph g = dt::random_graph(rng, 9, 0.5);
        Clustering L = dt::random_partition(rng, g.node_ids(), g);
        ObjectiveGate gate(g, {}, ObjectiveSpec::correlation());

        bool any_improving = false;
        for (ObjectId r : L.object_ids()) {
            if (L.members(L.cluster_of(r)).size() < 2) continue;
            if (delta_if_split_out(L, g, r, ObjectiveSpec::correlation(), {}) < -1e-12)
                any_improving = true;
        }
        Clustering copy = L;
        const PassResult res = split_pass(copy, g, dt::stub_split_model(), gate);
        if (!any_improving) {
            CHECK(!res.changed);
            CHECK(copy.same_partition(L));
        } else {
            CHECK(res.changed);
        }
    }
}

TEST_CASE("dynamicc_full is a fixpoint under all-negative models") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering L = dt::example1_old_clustering(g);
    const Clustering before = L;
    const Clustering out = dynamicc_full(L, g, {}, ObjectiveSpec::correlation(),
                                         always_negative(ModelKind::Merge),
                                         always_negative(ModelKind::Split));
    CHECK(out.same_partition(before));
}

TEST_CASE("dynamicc_full reproduces the new clustering of the walkthrough") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering L = dt::example1_old_clustering(g);
    L = initial_processing(L, {DataOperation::add(ObjectRecord{6, {}}),
                               DataOperation::add(ObjectRecord{7, {}})}, g);

    std::vector<CommittedChange> commits;
    const Clustering out = dynamicc_full(
        L, g, {}, ObjectiveSpec::correlation(), dt::stub_merge_model(), dt::stub_split_model(),
        [&](const CommittedChange& c) { commits.push_back(c); });

    std::vector<std::vector<ObjectId>> expect = dt::example1_new_partition();
    std::sort(expect.begin(), expect.end());
    CHECK(out.canonical_clusters() == expect);

    // the three changes: merge(C2,r6) at -1, split(C1) at -0.2, merge(r1,r7) at -1
    REQUIRE(commits.size() == 3);
    for (const auto& c : commits) CHECK(c.delta < -1e-12);
    std::vector<double> deltas;
    for (const auto& c : commits) deltas.push_back(c.delta);
    std::sort(deltas.begin(), deltas.end());
    CHECK(deltas[0] == doctest::Approx(-1.0));
    CHECK(deltas[1] == doctest::Approx(-1.0));
    CHECK(deltas[2] == doctest::Approx(-0.2));

    // matches the batch result on the same seven objects
    CHECK(correlation_objective(out, g) == doctest::Approx(1.6));
}

TEST_CASE("adversarial all-positive model: gate filters every non-improving change") {
    Rng rng(61);
    for (int trial = 0; trial < 15; ++trial) {
        const SimilarityGraph g = dt::random_graph(rng, 10, 0.45);
        Clustering L = dt::random_partition(rng, g.node_ids(), g);
        const double before = dt::correlation_bruteforce(L, g);

        std::vector<double> deltas;
        const Clustering out = dynamicc_full(
            L, g, {}, ObjectiveSpec::correlation(), TrainedModel::permissive(ModelKind::Merge),
            TrainedModel::permissive(ModelKind::Split),
            [&](const CommittedChange& c) { deltas.push_back(c.delta); });

        const double after = dt::correlation_bruteforce(out, g);
        CHECK(after <= before + 1e-12);
        double sum = 0.0;
        for (double d : deltas) {
            CHECK(d < -1e-12);
            sum += d;
        }
        CHECK(after - before == doctest::Approx(sum).epsilon(1e-9));
    }
}

TEST_CASE("naive incremental") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering L = dt::example1_old_clustering(g);

    // empty ops: unchanged
    const Clustering same = naive_incremental(L, g, {}, 0.3);
    CHECK(same.same_partition(L));

    // r7 joins C1 (avg similarity 1/3 > 0.3), reproducing the suboptimal
    // narrative; r6 joins C2 (avg 0.75).
    Clustering placed = naive_incremental(
        L, g, {DataOperation::add(ObjectRecord{6, {}}), DataOperation::add(ObjectRecord{7, {}})},
        0.3);
    CHECK(placed.cluster_of(7) == placed.cluster_of(1));
    CHECK(placed.cluster_of(6) == placed.cluster_of(4));
    CHECK(placed.cluster_count() == 2);

    // threshold above 1/3: r7 becomes a singleton
    Clustering strict = naive_incremental(
        L, g, {DataOperation::add(ObjectRecord{7, {}})}, 0.5);
    CHECK(strict.members(strict.cluster_of(7)) == std::vector<ObjectId>{7});
}

TEST_CASE("naive never beats the dynamic engine on the walkthrough objective") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering old_clustering = dt::example1_old_clustering(g);
    const std::vector<DataOperation> ops{DataOperation::add(ObjectRecord{6, {}}),
                                         DataOperation::add(ObjectRecord{7, {}})};

    const Clustering naive_out = naive_incremental(old_clustering, g, ops, 0.3);
    Clustering processed = initial_processing(old_clustering, ops, g);
    const Clustering dynamic_out =
        dynamicc_full(processed, g, {}, ObjectiveSpec::correlation(), dt::stub_merge_model(),
                      dt::stub_split_model());
    CHECK(correlation_objective(naive_out, g) >=
          correlation_objective(dynamic_out, g) - 1e-12);
}

TEST_CASE("greedy incremental reaches the batch result on the walkthrough") {
    const SimilarityGraph g = dt::example1_graph();
    Clustering old_clustering = dt::example1_old_clustering(g);
    const std::vector<DataOperation> ops{DataOperation::add(ObjectRecord{6, {}}),
                                         DataOperation::add(ObjectRecord{7, {}})};
    const Clustering out =
        greedy_incremental(old_clustering, g, {}, ObjectiveSpec::correlation(), ops);
    std::vector<std::vector<ObjectId>> expect = dt::example1_new_partition();
    std::sort(expect.begin(), expect.end());
    CHECK(out.canonical_clusters() == expect);

    // no ops: nothing to improve, zero budget
    const Clustering idle =
        greedy_incremental(old_clustering, g, {}, ObjectiveSpec::correlation(), {});
    CHECK(idle.same_partition(old_clustering));
}

TEST_CASE("greedy objective is monotone per applied operator") {
    Rng rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        const SimilarityGraph g = dt::random_graph(rng, 12, 0.4);
        std::vector<ObjectId> initial_ids;
        for (ObjectId id = 1; id <= 8; ++id) initial_ids.push_back(id);
        Clustering L = dt::random_partition(rng, initial_ids, g);
        std::vector<DataOperation> ops;
        for (ObjectId id = 9; id <= 12; ++id) ops.push_back(DataOperation::add({id, {}}));

        const double before =
            dt::correlation_bruteforce(initial_processing(L, ops, g), g);
        const Clustering out = greedy_incremental(L, g, {}, ObjectiveSpec::correlation(), ops);
        CHECK(dt::correlation_bruteforce(out, g) <= before + 1e-12);
    }
}

TEST_CASE("false positives are harmless: permissive run matches the pass-semantics oracle") {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const SimilarityGraph g = dt::random_graph(rng, 9, 0.5);
        Clustering L = dt::random_partition(rng, g.node_ids(), g);
        const Clustering mine = dynamicc_full(
            L, g, {}, ObjectiveSpec::correlation(), TrainedModel::permissive(ModelKind::Merge),
            TrainedModel::permissive(ModelKind::Split));

        std::vector<std::vector<ObjectId>> expect;
        for (const auto& s : pass_semantics_oracle(L, g))
            expect.emplace_back(s.begin(), s.end());
        std::sort(expect.begin(), expect.end());
        CHECK(mine.canonical_clusters() == expect);

        // no harm, and no improving single-object split survives
        CHECK(dt::correlation_bruteforce(mine, g) <=
              dt::correlation_bruteforce(L, g) + 1e-12);
        for (ObjectId r : mine.object_ids()) {
            if (mine.members(mine.cluster_of(r)).size() < 2) continue;
            CHECK(delta_if_split_out(mine, g, r, ObjectiveSpec::correlation(), {}) >= -1e-12);
        }
    }
}

TEST_CASE("kmeans gate pairs changes to preserve k") {
    const Snapshot pts = numeric_snapshot({{0.0}, {0.3}, {5.0}, {5.2}, {9.0}, {9.3}});
    SimilarityGraph g;
    for (ObjectId id = 1; id <= 6; ++id) g.add_node(id);
    // deliberately poor 3-clustering: blobs crossed
    Clustering L = Clustering::from_clusters({{1, {1, 3}}, {2, {2, 4}}, {3, {5, 6}}}, g);
    const auto spec = ObjectiveSpec::kmeans(3);
    const double before = kmeans_objective(L, pts, 3);

    const Clustering out =
        dynamicc_full(L, g, pts, spec, TrainedModel::permissive(ModelKind::Merge),
                      TrainedModel::permissive(ModelKind::Split));
    CHECK(out.cluster_count() == 3);
    CHECK(kmeans_objective(out, pts, 3) <= before + 1e-12);
}

TEST_CASE("dbscan gate: stability plus density connectivity") {
    // two blobs; previous core = all points
    const Snapshot pts = numeric_snapshot(
        {{0.0}, {0.2}, {0.4}, {10.0}, {10.2}, {10.4}});
    std::set<ObjectId> prev_core{1, 2, 3, 4, 5, 6};
    DbscanGate gate(pts, 1.0, 2, prev_core);

    SimilarityGraph g;
    for (ObjectId id = 1; id <= 6; ++id) g.add_node(id);
    Clustering L = Clustering::from_clusters(
        {{1, {1, 2}}, {2, {3}}, {3, {4, 5}}, {4, {6}}}, g);

    // merging {1,2} with {3}: bridged within the blob
    CHECK(gate.check_merge(L, 1, 2).has_value());
    // merging across blobs: no eps bridge
    CHECK(!gate.check_merge(L, 1, 3).has_value());

    // split of a connected member is rejected
    CHECK(!gate.check_split(L, 1, 2).has_value());

    // mixed cluster: the far member may split out
    Clustering M = Clustering::from_clusters({{1, {1, 2, 6}}, {2, {3}}, {3, {4, 5}}}, g);
    CHECK(gate.check_split(M, 1, 6).has_value());
    CHECK(!gate.check_split(M, 1, 1).has_value());

    // instability: a previously-core point that lost core status freezes
    // changes touching its cluster
    Snapshot thinned = pts;
    thinned.erase(2);
    thinned.erase(3);
    DbscanGate unstable(thinned, 1.0, 2, prev_core);  // 1 is no longer core
    Clustering N = Clustering::from_clusters({{1, {1}}, {3, {4, 5}}, {4, {6}}}, g);
    CHECK(!unstable.check_merge(N, 1, 3).has_value());
    // clusters of still-core points keep moving
    CHECK(unstable.check_merge(N, 3, 4).has_value());
}
