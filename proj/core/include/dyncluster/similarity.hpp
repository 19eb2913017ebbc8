#pragma once

#include <string>
#include <vector>

#include "dyncluster/record.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

// Metric applied to plain text attributes; token sets always use Jaccard and
// numeric vectors always use the Euclidean similarity bridge.
enum class Metric {
    Jaccard,
    CosineTrigram,
    Euclidean,
    Levenshtein,
};

Metric parse_metric(const std::string& id);
std::string metric_id(Metric m);

struct SimilarityParams {
    Metric metric = Metric::Jaccard;
    double euclidean_scale = 1.0;  // d(a,b) == scale maps to similarity 0.5
    double prune_threshold = 0.1;  // edges below this are not stored
};

// |a n b| / |a u b|; 1 when both sets are empty. Inputs must be sorted.
double jaccard(const TokenSet& a, const TokenSet& b);

// Cosine of trigram count vectors over the sentinel-padded strings.
double cosine_trigram(const std::string& a, const std::string& b);

// 1 / (1 + d(a,b)/scale); requires equal dimensions and scale > 0.
double euclidean_similarity(const std::vector<double>& a, const std::vector<double>& b,
                            double scale);

// 1 - editdistance(a,b) / max(|a|,|b|); 1 when both empty.
double normalized_levenshtein(const std::string& a, const std::string& b);

// Unweighted mean of per-attribute similarities; attribute metric follows the
// attribute type. Records must share arity and attribute types.
double record_similarity(const ObjectRecord& a, const ObjectRecord& b,
                         const SimilarityParams& params);

// Checks that every record's attribute types are compatible with the metric
// (e.g. Euclidean cannot score text); throws UnsupportedMetric otherwise.
void validate_schema(const Snapshot& records, const SimilarityParams& params);

// All-pairs similarity above the pruning threshold; symmetric; every record
// id becomes a node even when isolated.
SimilarityGraph build_graph(const Snapshot& records, const SimilarityParams& params);

}  // namespace dyncluster
