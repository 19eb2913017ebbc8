#include "dyncluster/evalx.hpp"

#include <map>
#include <sstream>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

void check_universe(const Clustering& a, const Clustering& b) {
    if (a.object_count() != b.object_count() || a.object_ids() != b.object_ids())
        fail(ErrorCode::UniverseMismatch, "clusterings cover different object ids");
}

double pair_count(double n) { return 0.5 * n * (n - 1.0); }

// Contingency counts keyed by (cluster of a, cluster of b).
std::map<std::pair<ClusterId, ClusterId>, double> contingency(const Clustering& a,
                                                              const Clustering& b) {
    std::map<std::pair<ClusterId, ClusterId>, double> table;
    for (ObjectId id : a.object_ids()) table[{a.cluster_of(id), b.cluster_of(id)}] += 1.0;
    return table;
}

}  // namespace

PairCounts pair_counting(const Clustering& predicted, const Clustering& truth) {
    check_universe(predicted, truth);

    double tp = 0.0;
    for (const auto& [key, n] : contingency(predicted, truth)) tp += pair_count(n);
    double predicted_pairs = 0.0;
    for (const auto& [c, members] : predicted.clusters())
        predicted_pairs += pair_count(static_cast<double>(members.size()));
    double truth_pairs = 0.0;
    for (const auto& [c, members] : truth.clusters())
        truth_pairs += pair_count(static_cast<double>(members.size()));

    PairCounts out;
    out.precision = predicted_pairs > 0.0 ? tp / predicted_pairs : 1.0;
    out.recall = truth_pairs > 0.0 ? tp / truth_pairs : 1.0;
    out.f1 = (out.precision + out.recall) > 0.0
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

double purity(const Clustering& predicted, const Clustering& truth) {
    check_universe(predicted, truth);
    if (predicted.object_count() == 0) return 1.0;
    // Max overlap per predicted cluster.
    std::map<ClusterId, double> best;
    for (const auto& [key, n] : contingency(predicted, truth)) {
        auto& cur = best[key.first];
        cur = std::max(cur, n);
    }
    double sum = 0.0;
    for (const auto& [c, n] : best) sum += n;
    return sum / static_cast<double>(predicted.object_count());
}

double inverse_purity(const Clustering& predicted, const Clustering& truth) {
    return purity(truth, predicted);
}

MetricReport metric_report(const Clustering& predicted, const Clustering& truth,
                           const ObjectiveSpec& spec, const SimilarityGraph& g,
                           const Snapshot& records) {
    MetricReport report;
    const PairCounts pc = pair_counting(predicted, truth);
    report.f1 = pc.f1;
    report.precision = pc.precision;
    report.recall = pc.recall;
    report.purity = purity(predicted, truth);
    report.inverse_purity = inverse_purity(predicted, truth);
    report.objective = evaluate(spec, predicted, g, records);
    return report;
}

std::string serialize_metric_report(const MetricReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "objective " << report.objective << "\n";
    out << "f1 " << report.f1 << "\n";
    out << "precision " << report.precision << "\n";
    out << "recall " << report.recall << "\n";
    out << "purity " << report.purity << "\n";
    out << "inverse_purity " << report.inverse_purity << "\n";
    for (const auto& [phase, seconds] : report.wall_times)
        out << "time_" << phase << " " << seconds << "\n";
    return out.str();
}

MetricReport parse_metric_report(const std::string& text) {
    MetricReport report;
    std::istringstream in(text);
    std::string key;
    double value;
    while (in >> key >> value) {
        if (key == "objective")
            report.objective = value;
        else if (key == "f1")
            report.f1 = value;
        else if (key == "precision")
            report.precision = value;
        else if (key == "recall")
            report.recall = value;
        else if (key == "purity")
            report.purity = value;
        else if (key == "inverse_purity")
            report.inverse_purity = value;
        else if (key.rfind("time_", 0) == 0)
            report.wall_times[key.substr(5)] = value;
        else
            fail(ErrorCode::IoError, "unknown metric key '" + key + "'");
    }
    return report;
}

}  // namespace dyncluster
