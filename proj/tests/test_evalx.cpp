#include <doctest.h>

#include "dyncluster/error.hpp"
#include "dyncluster/evalx.hpp"
#include "support/fixtures.hpp"

using namespace dyncluster;
namespace dt = dyncluster::testing;

namespace {

Clustering relabeled(const Clustering& L, ClusterId offset, const SimilarityGraph& g) {
    std::map<ClusterId, std::vector<ObjectId>> clusters;
    for (const auto& [c, members] : L.clusters()) clusters[c + offset] = members;
    return Clustering::from_clusters(clusters, g);
}

}  // namespace

TEST_CASE("pair counting on identical and degenerate cases") {
    const SimilarityGraph g = dt::example1_graph();
    const Clustering L = dt::example1_old_clustering(g);
    const PairCounts same = pair_counting(L, L);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f1 == 1.0);

    // all-singletons vs one 3-cluster: no predicted pair
    SimilarityGraph h;
    for (ObjectId id = 1; id <= 3; ++id) h.add_node(id);
    const Clustering singles = Clustering::singletons({1, 2, 3});
    const Clustering one = Clustering::from_clusters({{1, {1, 2, 3}}}, h);
    const PairCounts pc = pair_counting(singles, one);
    CHECK(pc.precision == 1.0);  // vacuous
    CHECK(pc.recall == 0.0);
    CHECK(pc.f1 == 0.0);

    const Clustering other = Clustering::singletons({1, 2, 4});
    CHECK_THROWS_AS(pair_counting(singles, other), Error);
}

TEST_CASE("pair counting: precision(p,t) equals recall(t,p) (fuzz)") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const SimilarityGraph g = dt::random_graph(rng, 10, 0.3);
        const Clustering a = dt::random_partition(rng, g.node_ids(), g);
        const Clustering b = dt::random_partition(rng, g.node_ids(), g);
        const PairCounts ab = pair_counting(a, b);
        const PairCounts ba = pair_counting(b, a);
        CHECK(ab.precision == doctest::Approx(ba.recall));
        CHECK(ab.recall == doctest::Approx(ba.precision));
        CHECK(ab.f1 == doctest::Approx(ba.f1));
        CHECK(ab.f1 >= 0.0);
        CHECK(ab.f1 <= 1.0);
    }
}

TEST_CASE("purity and inverse purity") {
    SimilarityGraph g;
    for (ObjectId id = 1; id <= 4; ++id) g.add_node(id);
    const Clustering all = Clustering::from_clusters({{1, {1, 2, 3, 4}}}, g);
    const Clustering halves = Clustering::from_clusters({{1, {1, 2}}, {2, {3, 4}}}, g);
    CHECK(purity(all, halves) == doctest::Approx(0.5));
    CHECK(inverse_purity(all, halves) == doctest::Approx(1.0));
    CHECK(purity(halves, halves) == 1.0);
    // asymmetry in general
    CHECK(purity(all, halves) != inverse_purity(all, halves));
}

TEST_CASE("metrics are invariant under cluster relabeling") {
    Rng rng(7);
    const SimilarityGraph g = dt::random_graph(rng, 9, 0.4);
    const Clustering a = dt::random_partition(rng, g.node_ids(), g);
    const Clustering b = dt::random_partition(rng, g.node_ids(), g);
    const Clustering a2 = relabeled(a, 1000, g);
    const Clustering b2 = relabeled(b, 500, g);
    CHECK(pair_counting(a, b).f1 == doctest::Approx(pair_counting(a2, b2).f1));
    CHECK(purity(a, b) == doctest::Approx(purity(a2, b2)));
    CHECK(inverse_purity(a, b) == doctest::Approx(inverse_purity(a2, b2)));
}

TEST_CASE("metric report: self comparison and serialization round-trip") {
    const SimilarityGraph g = dt::example1_graph();
    const Clustering L = Clustering::from_clusters(
        {{1, {1, 7}}, {2, {2, 3}}, {3, {4, 5, 6}}}, g);
    MetricReport report = metric_report(L, L, ObjectiveSpec::correlation(), g, {});
    CHECK(report.f1 == 1.0);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 1.0);
    CHECK(report.purity == 1.0);
    CHECK(report.inverse_purity == 1.0);
    CHECK(report.objective == doctest::Approx(1.6));

    report.wall_times["recluster"] = 0.125;
    report.wall_times["retrain"] = 0.5;
    const std::string text = serialize_metric_report(report);
    const MetricReport back = parse_metric_report(text);
    CHECK(back.objective == doctest::Approx(report.objective));
    CHECK(back.f1 == report.f1);
    CHECK(back.wall_times.at("recluster") == 0.125);
    CHECK(back.wall_times.at("retrain") == 0.5);
}

TEST_CASE("metric report on a known mismatch") {
    SimilarityGraph g;
    for (ObjectId id = 1; id <= 4; ++id) g.add_node(id);
    const Clustering predicted = Clustering::from_clusters({{1, {1, 2}}, {2, {3, 4}}}, g);
    const Clustering truth = Clustering::from_clusters({{1, {1, 2, 3}}, {2, {4}}}, g);
    const PairCounts pc = pair_counting(predicted, truth);
    // predicted pairs: {1,2},{3,4}; truth pairs: {1,2},{1,3},{2,3}; TP = {1,2}
    CHECK(pc.precision == doctest::Approx(0.5));
    CHECK(pc.recall == doctest::Approx(1.0 / 3.0));
    CHECK(pc.f1 == doctest::Approx(2 * 0.5 * (1.0 / 3.0) / (0.5 + 1.0 / 3.0)));
    CHECK(purity(predicted, truth) == doctest::Approx(0.75));
}
