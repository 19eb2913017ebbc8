#pragma once

// Brute-force reference computations. These deliberately avoid the library's
// cached aggregates and incremental deltas: every value is a direct sum over
// object pairs.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster::testing {

// Correlation objective by full pair enumeration.
inline double correlation_bruteforce(const Clustering& L, const SimilarityGraph& g) {
    const auto ids = L.object_ids();
    double total = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const double s = g.similarity(ids[i], ids[j]);
            if (L.cluster_of(ids[i]) == L.cluster_of(ids[j]))
                total += 1.0 - s;
            else
                total += s;
        }
    }
    return total;
}

inline double intra_bruteforce(const std::vector<ObjectId>& members, const SimilarityGraph& g) {
    double total = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            total += g.similarity(members[i], members[j]);
    return total;
}

inline double inter_bruteforce(const std::vector<ObjectId>& a, const std::vector<ObjectId>& b,
                               const SimilarityGraph& g) {
    double total = 0.0;
    for (ObjectId x : a)
        for (ObjectId y : b) total += g.similarity(x, y);
    return total;
}

// DB-index by the direct formula over mean pairwise dissimilarities.
inline double dbindex_bruteforce(const Clustering& L, const SimilarityGraph& g) {
    const auto ids = L.cluster_ids();
    std::vector<double> scatter;
    for (ClusterId c : ids) {
        const auto& m = L.members(c);
        if (m.size() < 2) {
            scatter.push_back(0.0);
        } else {
            const double pairs = 0.5 * static_cast<double>(m.size()) *
                                 static_cast<double>(m.size() - 1);
            scatter.push_back(1.0 - intra_bruteforce(m, g) / pairs);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const double pairs = static_cast<double>(L.members(ids[i]).size()) *
                                 static_cast<double>(L.members(ids[j]).size());
            const double m_ij = 1.0 - inter_bruteforce(L.members(ids[i]), L.members(ids[j]), g) / pairs;
            worst = std::max(worst, (scatter[i] + scatter[j]) / m_ij);
        }
        total += worst;
    }
    return total / static_cast<double>(ids.size());
}

// Classic two-row edit distance, written independently of the library.
inline int edit_distance_oracle(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Trigram cosine with explicit padded-string vectors.
inline double trigram_cosine_oracle(const std::string& a, const std::string& b) {
    auto grams = [](const std::string& s) {
        std::string padded = std::string(2, '\x02') + s + std::string(2, '\x03');
        std::map<std::string, int> counts;
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) counts[padded.substr(i, 3)]++;
        return counts;
    };
    const auto ca = grams(a), cb = grams(b);
    double dot = 0, na = 0, nb = 0;
    for (const auto& [t, n] : ca) {
        na += n * n;
        if (cb.count(t)) dot += n * cb.at(t);
    }
    for (const auto& [t, n] : cb) nb += n * n;
    if (na == 0 || nb == 0) return a == b ? 1.0 : 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Average-similarity feature oracle: full scans over all other clusters.
struct FeatureOracle {
    double d1 = 0, d2 = 0, d3 = 1, d4 = 1;
};

inline FeatureOracle features_bruteforce(ClusterId cluster, const Clustering& L,
                                         const SimilarityGraph& g) {
    FeatureOracle f;
    const auto& members = L.members(cluster);
    f.d3 = static_cast<double>(members.size());
    if (members.size() > 1) {
        const double pairs =
            0.5 * static_cast<double>(members.size()) * static_cast<double>(members.size() - 1);
        f.d1 = intra_bruteforce(members, g) / pairs;
    }
    bool found = false;
    for (ClusterId other : L.cluster_ids()) {
        if (other == cluster) continue;
        const double avg = inter_bruteforce(members, L.members(other), g) /
                           (f.d3 * static_cast<double>(L.members(other).size()));
        if (!found || avg > f.d2) {
            found = true;
            f.d2 = avg;
            f.d4 = static_cast<double>(L.members(other).size());
        }
    }
    return f;
}

}  // namespace dyncluster::testing
