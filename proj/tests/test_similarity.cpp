#include <doctest.h>

#include <cmath>
#include <cstring>

#include "dyncluster/error.hpp"
#include "dyncluster/similarity.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dyncluster;
namespace dt = dyncluster::testing;

TEST_CASE("jaccard basics") {
    CHECK(jaccard(make_token_set({"x", "y"}), make_token_set({"x", "y"})) == 1.0);
    CHECK(jaccard(make_token_set({"x", "y"}), make_token_set({"y", "z"})) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(jaccard(make_token_set({}), make_token_set({"x"})) == 0.0);
    CHECK(jaccard(make_token_set({}), make_token_set({})) == 1.0);
}

TEST_CASE("cosine trigram identity and disjoint") {
    CHECK(cosine_trigram("abc", "abc") == doctest::Approx(1.0));
    CHECK(cosine_trigram("abc", "xyz") == 0.0);
    CHECK(cosine_trigram("", "") == 1.0);
}

TEST_CASE("cosine trigram matches the explicit vector oracle") {
    const std::pair<std::string, std::string> cases[] = {
        {"abcd", "abce"}, {"hello world", "hello word"}, {"a", "ab"}, {"", "a"}};
    for (const auto& [a, b] : cases) {
        CHECK(cosine_trigram(a, b) == doctest::Approx(dt::trigram_cosine_oracle(a, b)));
    }
}

TEST_CASE("euclidean similarity formula") {
    CHECK(euclidean_similarity({1, 2, 3}, {1, 2, 3}, 2.0) == 1.0);
    // distance == scale -> 0.5
    CHECK(euclidean_similarity({0}, {3}, 3.0) == doctest::Approx(0.5));
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> a{rng.uniform_real(-5, 5), rng.uniform_real(-5, 5),
                              rng.uniform_real(-5, 5)};
        std::vector<double> b{rng.uniform_real(-5, 5), rng.uniform_real(-5, 5),
                              rng.uniform_real(-5, 5)};
        double d = 0;
        for (int k = 0; k < 3; ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
        d = std::sqrt(d);
        CHECK(euclidean_similarity(a, b, 1.7) == doctest::Approx(1.0 / (1.0 + d / 1.7)));
    }
    CHECK_THROWS_AS(euclidean_similarity({1, 2}, {1}, 1.0), Error);
}

TEST_CASE("normalized levenshtein") {
    CHECK(normalized_levenshtein("kitten", "kitten") == 1.0);
    CHECK(normalized_levenshtein("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
    CHECK(normalized_levenshtein("", "ab") == 0.0);
    CHECK(normalized_levenshtein("", "") == 1.0);
    Rng rng(11);
    const char* words[] = {"alpha", "alphabet", "blight", "bright", "brigth", ""};
    for (const char* a : words) {
        for (const char* b : words) {
            const double expect =
                (a == std::string() && b == std::string())
                    ? 1.0
                    : 1.0 - static_cast<double>(dt::edit_distance_oracle(a, b)) /
                                std::max<std::size_t>(std::strlen(a), std::strlen(b));
            CHECK(normalized_levenshtein(a, b) == doctest::Approx(expect));
        }
    }
}

TEST_CASE("metric symmetry, bounds, identity (fuzz)") {
    Rng rng(23);
    auto rand_string = [&](std::size_t max_len) {
        std::string s;
        const std::size_t len = rng.uniform_u64(max_len + 1);
        for (std::size_t i = 0; i < len; ++i)
            s.push_back(static_cast<char>('a' + rng.uniform_u64(6)));
        return s;
    };
    for (int i = 0; i < 200; ++i) {
        const std::string a = rand_string(8), b = rand_string(8);
        for (auto metric : {&cosine_trigram, &normalized_levenshtein}) {
            const double ab = metric(a, b);
            CHECK(ab == metric(b, a));
            CHECK(ab >= 0.0);
            CHECK(ab <= 1.0);
            CHECK(metric(a, a) == 1.0);
        }
    }
}

TEST_CASE("record similarity averages attributes") {
    SimilarityParams params;
    ObjectRecord a{1, {make_token_set({"x", "y"}), RawText{"kitten"}}};
    ObjectRecord b{2, {make_token_set({"y", "z"}), RawText{"sitting"}}};
    const double expect = 0.5 * (1.0 / 3.0 + (1.0 - 3.0 / 7.0));
    CHECK(record_similarity(a, b, params) == doctest::Approx(expect));
}

TEST_CASE("build_graph single record and figure fixture") {
    SimilarityParams params;
    Snapshot one;
    one[1] = ObjectRecord{1, {make_token_set({"a"})}};
    CHECK(build_graph(one, params).edge_count() == 0);

    // The walkthrough fixture is hand-set, not metric-derived; check shape.
    const SimilarityGraph g = dt::example1_graph();
    CHECK(g.edge_count() == 6);
    CHECK(g.total_edge_weight() == doctest::Approx(5.2));
    CHECK(g.similarity(1, 7) == 1.0);
    CHECK(g.similarity(7, 1) == 1.0);
    CHECK(g.similarity(3, 4) == 0.0);
}

TEST_CASE("build_graph equals quadratic brute force on random records") {
    Rng rng(5);
    SimilarityParams params;
    params.prune_threshold = 0.1;
    Snapshot records;
    for (ObjectId id = 1; id <= 50; ++id) {
        std::vector<std::string> tokens;
        const std::size_t n = 1 + rng.uniform_u64(4);
        for (std::size_t t = 0; t < n; ++t)
            tokens.push_back(std::string(1, static_cast<char>('a' + rng.uniform_u64(8))));
        std::string text;
        for (std::size_t c = 0; c < 6; ++c)
            text.push_back(static_cast<char>('a' + rng.uniform_u64(5)));
        records[id] = ObjectRecord{id, {make_token_set(tokens), RawText{text}}};
    }
    const SimilarityGraph g = build_graph(records, params);
    for (auto ia = records.begin(); ia != records.end(); ++ia) {
        for (auto ib = std::next(ia); ib != records.end(); ++ib) {
            const double s = record_similarity(ia->second, ib->second, params);
            const double stored = g.similarity(ia->first, ib->first);
            if (s >= params.prune_threshold)
                CHECK(stored == doctest::Approx(s).epsilon(1e-12));
            else
                CHECK(stored == 0.0);
        }
    }
}

TEST_CASE("metric ids parse and euclidean rejects text schemas") {
    CHECK(parse_metric("jaccard") == Metric::Jaccard);
    CHECK(parse_metric("cosine-trigram") == Metric::CosineTrigram);
    CHECK(parse_metric("euclidean") == Metric::Euclidean);
    CHECK(parse_metric("levenshtein") == Metric::Levenshtein);
    CHECK_THROWS_AS(parse_metric("cosine"), Error);

    SimilarityParams params;
    params.metric = Metric::Euclidean;
    Snapshot records;
    records[1] = ObjectRecord{1, {make_token_set({"a"})}};
    records[2] = ObjectRecord{2, {make_token_set({"b"})}};
    CHECK_THROWS_AS(build_graph(records, params), Error);
}
