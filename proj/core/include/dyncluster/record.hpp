#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace dyncluster {

using ObjectId = std::int64_t;
using ClusterId = std::int64_t;

// Token set compared with Jaccard. Tokens kept sorted and deduplicated.
struct TokenSet {
    std::vector<std::string> tokens;

    bool operator==(const TokenSet&) const = default;
};

// Free text compared with the trigram cosine metric.
struct TrigramText {
    std::string value;

    bool operator==(const TrigramText&) const = default;
};

// Numeric vector compared with the distance-to-similarity bridge.
struct NumericVector {
    std::vector<double> values;

    bool operator==(const NumericVector&) const = default;
};

// Raw string compared with normalized Levenshtein.
struct RawText {
    std::string value;

    bool operator==(const RawText&) const = default;
};

using AttributeValue = std::variant<TokenSet, TrigramText, NumericVector, RawText>;

// One dataset object. Attribute arity and types are constant across a dataset.
struct ObjectRecord {
    ObjectId id = 0;
    std::vector<AttributeValue> attributes;

    bool operator==(const ObjectRecord&) const = default;
};

// Current dataset snapshot keyed by object id (ordered for determinism).
using Snapshot = std::map<ObjectId, ObjectRecord>;

TokenSet make_token_set(std::vector<std::string> tokens);

}  // namespace dyncluster
