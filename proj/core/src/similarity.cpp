#include "dyncluster/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

constexpr char kPadBegin = '\x02';
constexpr char kPadEnd = '\x03';

std::map<std::string, int> trigram_counts(const std::string& s) {
    std::string padded;
    padded.reserve(s.size() + 4);
    padded.push_back(kPadBegin);
    padded.push_back(kPadBegin);
    for (char c : s) padded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    padded.push_back(kPadEnd);
    padded.push_back(kPadEnd);
    std::map<std::string, int> counts;
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) counts[padded.substr(i, 3)]++;
    return counts;
}

}  // namespace

Metric parse_metric(const std::string& id) {
    if (id == "jaccard") return Metric::Jaccard;
    if (id == "cosine-trigram") return Metric::CosineTrigram;
    if (id == "euclidean") return Metric::Euclidean;
    if (id == "levenshtein") return Metric::Levenshtein;
    fail(ErrorCode::UnsupportedMetric, "unknown metric id '" + id + "'");
}

std::string metric_id(Metric m) {
    switch (m) {
        case Metric::Jaccard: return "jaccard";
        case Metric::CosineTrigram: return "cosine-trigram";
        case Metric::Euclidean: return "euclidean";
        case Metric::Levenshtein: return "levenshtein";
    }
    return "jaccard";
}

double jaccard(const TokenSet& a, const TokenSet& b) {
    if (a.tokens.empty() && b.tokens.empty()) return 1.0;
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.tokens.size() && j < b.tokens.size()) {
        int cmp = a.tokens[i].compare(b.tokens[j]);
        if (cmp == 0) {
            ++inter;
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.tokens.size() + b.tokens.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double cosine_trigram(const std::string& a, const std::string& b) {
    const auto ca = trigram_counts(a);
    const auto cb = trigram_counts(b);
    if (ca == cb) return 1.0;  // exact identity, no sqrt rounding
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, n] : ca) {
        na += static_cast<double>(n) * n;
        auto it = cb.find(t);
        if (it != cb.end()) dot += static_cast<double>(n) * it->second;
    }
    for (const auto& [t, n] : cb) nb += static_cast<double>(n) * n;
    if (na == 0.0 || nb == 0.0) return a == b ? 1.0 : 0.0;
    return std::min(1.0, dot / (std::sqrt(na) * std::sqrt(nb)));
}

double euclidean_similarity(const std::vector<double>& a, const std::vector<double>& b,
                            double scale) {
    if (a.size() != b.size())
        fail(ErrorCode::DimensionMismatch,
             std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "scale must be > 0");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return 1.0 / (1.0 + std::sqrt(sq) / scale);
}

double normalized_levenshtein(const std::string& a, const std::string& b) {
    if (a.empty() && b.empty()) return 1.0;
    const std::size_t la = a.size(), lb = b.size();
    std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
    for (std::size_t j = 0; j <= lb; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= la; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= lb; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    const double dist = static_cast<double>(prev[lb]);
    return 1.0 - dist / static_cast<double>(std::max(la, lb));
}

namespace {

double attribute_similarity(const AttributeValue& a, const AttributeValue& b,
                            const SimilarityParams& params) {
    if (a.index() != b.index())
        fail(ErrorCode::SchemaViolation, "attribute types differ between records");
    if (const auto* ta = std::get_if<TokenSet>(&a)) return jaccard(*ta, std::get<TokenSet>(b));
    if (const auto* tr = std::get_if<TrigramText>(&a))
        return cosine_trigram(tr->value, std::get<TrigramText>(b).value);
    if (const auto* nv = std::get_if<NumericVector>(&a))
        return euclidean_similarity(nv->values, std::get<NumericVector>(b).values,
                                    params.euclidean_scale);
    return normalized_levenshtein(std::get<RawText>(a).value, std::get<RawText>(b).value);
}

}  // namespace

double record_similarity(const ObjectRecord& a, const ObjectRecord& b,
                         const SimilarityParams& params) {
    if (a.attributes.size() != b.attributes.size())
        fail(ErrorCode::SchemaViolation, "attribute arity differs between records");
    if (a.attributes.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.attributes.size(); ++i)
        sum += attribute_similarity(a.attributes[i], b.attributes[i], params);
    return sum / static_cast<double>(a.attributes.size());
}

void validate_schema(const Snapshot& records, const SimilarityParams& params) {
    if (records.empty()) return;
    const ObjectRecord& first = records.begin()->second;
    for (const auto& [id, rec] : records) {
        if (rec.attributes.size() != first.attributes.size())
            fail(ErrorCode::SchemaViolation, "record " + std::to_string(id) + " arity differs");
        for (std::size_t i = 0; i < rec.attributes.size(); ++i) {
            if (rec.attributes[i].index() != first.attributes[i].index())
                fail(ErrorCode::SchemaViolation,
                     "record " + std::to_string(id) + " attribute " + std::to_string(i) +
                         " type differs");
            const bool numeric = std::holds_alternative<NumericVector>(rec.attributes[i]);
            if (params.metric == Metric::Euclidean && !numeric)
                fail(ErrorCode::UnsupportedMetric, "euclidean metric on non-numeric attribute");
        }
    }
}

SimilarityGraph build_graph(const Snapshot& records, const SimilarityParams& params) {
    validate_schema(records, params);
    SimilarityGraph g;
    for (const auto& [id, _] : records) g.add_node(id);
    for (auto ia = records.begin(); ia != records.end(); ++ia) {
        for (auto ib = std::next(ia); ib != records.end(); ++ib) {
            const double s = record_similarity(ia->second, ib->second, params);
            if (s >= params.prune_threshold && s > 0.0)
                g.set_edge(ia->first, ib->first, std::min(s, 1.0));
        }
    }
    return g;
}

}  // namespace dyncluster
