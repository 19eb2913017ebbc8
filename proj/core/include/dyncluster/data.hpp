#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dyncluster/operations.hpp"
#include "dyncluster/record.hpp"
#include "dyncluster/rng.hpp"
#include "dyncluster/similarity.hpp"

namespace dyncluster {

enum class ColumnRole { Id, TokenText, TrigramText, Numeric, RawString, Ignore };

// Per-column typing of a CSV file. At most one id column; all numeric
// columns fold into one vector attribute, each text column is its own
// attribute.
struct DatasetSchema {
    std::vector<ColumnRole> columns;

    // Comma-separated role list: id,token,trigram,numeric,raw,ignore
    // ("token-text", "trigram-text" and "string" are accepted aliases).
    static DatasetSchema parse(const std::string& text);
    // One text role for every column (chosen by metric), first column id
    // when its header cell is literally "id".
    static DatasetSchema infer(const std::vector<std::string>& header, Metric metric);

    void validate() const;
};

// Reads a headered CSV into typed records. Ids come from the id column when
// present, else from 1-based row order. Token text is lowercased and split
// on whitespace/punctuation; other text is lowercased verbatim.
Snapshot ingest_csv(std::istream& in, const DatasetSchema& schema);
Snapshot ingest_csv_file(const std::string& path, const DatasetSchema& schema);

enum class DupDistribution { Uniform, Poisson, Zipf };

DupDistribution parse_distribution(const std::string& id);

struct GeneratorConfig {
    std::size_t n_originals = 0;
    std::size_t n_duplicates = 0;
    DupDistribution distribution = DupDistribution::Uniform;
    double poisson_lambda = 2.0;
    double zipf_s = 1.5;
    std::uint64_t zipf_max = 20;     // duplicates-per-original truncation
    std::uint64_t uniform_max = 4;   // uniform draws 0..uniform_max
    int min_corruptions = 1;
    int max_corruptions = 3;
};

struct SyntheticDataset {
    Snapshot records;                       // originals then duplicates
    std::map<ObjectId, ObjectId> origin_of; // duplicate id -> original id
};

// Originals carry synthetic name/address/number fields; duplicates corrupt
// 1-3 fields of a sampled original (character edit, token swap, field
// truncation). Duplicates per original follow the configured distribution.
// Deterministic per seed.
SyntheticDataset generate_synthetic(const GeneratorConfig& config, Rng& rng);

// Mutates 1-2 attribute values of a record with the corruption operators;
// used for workload Update operations.
ObjectRecord corrupt_record(const ObjectRecord& rec, Rng& rng);

struct WorkloadConfig {
    std::size_t initial_count = 0;  // objects in the initial snapshot
    struct RoundCounts {
        std::size_t adds = 0;
        std::size_t removes = 0;
        std::size_t updates = 0;
    };
    std::vector<RoundCounts> rounds;
    std::uint64_t seed = 0;

    // Flat key=value text: initial, seed, rounds (uniform adds/removes/
    // updates counts) or repeated "round = adds removes updates" lines.
    static WorkloadConfig parse(const std::string& text);
    std::string serialize() const;
};

struct Workload {
    Snapshot initial;
    std::vector<RoundPlan> rounds;
};

// Splits the record pool into a seeded-random initial snapshot plus
// per-round operation plans. Adds draw unseen pool records; removes and
// updates pick live objects; updates corrupt 1-2 fields. Throws Exhausted
// when the pool or the live set cannot cover the requested counts.
Workload drive_workload(const Snapshot& pool, const WorkloadConfig& config);

}  // namespace dyncluster
