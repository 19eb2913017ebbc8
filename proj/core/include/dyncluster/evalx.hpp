#pragma once

#include <map>
#include <string>

#include "dyncluster/clustering.hpp"
#include "dyncluster/objective.hpp"

namespace dyncluster {

struct PairCounts {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

// Pair-counting precision/recall/F1 over unordered object pairs: a true
// positive is a pair co-clustered in both arguments. Vacuous denominators
// yield 1.0. Both clusterings must cover the same object ids.
PairCounts pair_counting(const Clustering& predicted, const Clustering& truth);

// Mean over predicted clusters of their maximal overlap with a truth
// cluster, normalized by object count.
double purity(const Clustering& predicted, const Clustering& truth);
double inverse_purity(const Clustering& predicted, const Clustering& truth);

// Aggregate quality record. Timing fields are filled in by callers and kept
// out of golden comparisons.
struct MetricReport {
    double objective = 0.0;
    double f1 = 1.0;
    double precision = 1.0;
    double recall = 1.0;
    double purity = 1.0;
    double inverse_purity = 1.0;
    std::map<std::string, double> wall_times;  // phase -> seconds
};

MetricReport metric_report(const Clustering& predicted, const Clustering& truth,
                           const ObjectiveSpec& spec, const SimilarityGraph& g,
                           const Snapshot& records);

// Flat "key value" lines, one metric per line; wall times as time_<phase>.
std::string serialize_metric_report(const MetricReport& report);
MetricReport parse_metric_report(const std::string& text);

}  // namespace dyncluster
