#include "dyncluster/data.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

// Minimal CSV row reader: quoted fields with doubled quotes.
bool read_csv_row(std::istream& in, std::vector<std::string>& row) {
    row.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    row.push_back(field);
    return true;
}

}  // namespace

DatasetSchema DatasetSchema::parse(const std::string& text) {
    DatasetSchema schema;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        part = lowercase(part);
        part.erase(std::remove_if(part.begin(), part.end(),
                                  [](unsigned char c) { return std::isspace(c); }),
                   part.end());
        if (part == "id")
            schema.columns.push_back(ColumnRole::Id);
        else if (part == "token" || part == "token-text")
            schema.columns.push_back(ColumnRole::TokenText);
        else if (part == "trigram" || part == "trigram-text")
            schema.columns.push_back(ColumnRole::TrigramText);
        else if (part == "numeric")
            schema.columns.push_back(ColumnRole::Numeric);
        else if (part == "raw" || part == "string")
            schema.columns.push_back(ColumnRole::RawString);
        else if (part == "ignore")
            schema.columns.push_back(ColumnRole::Ignore);
        else
            fail(ErrorCode::SchemaViolation, "unknown column role '" + part + "'");
    }
    schema.validate();
    return schema;
}

DatasetSchema DatasetSchema::infer(const std::vector<std::string>& header, Metric metric) {
    DatasetSchema schema;
    ColumnRole text_role = ColumnRole::TokenText;
    if (metric == Metric::CosineTrigram) text_role = ColumnRole::TrigramText;
    if (metric == Metric::Levenshtein) text_role = ColumnRole::RawString;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == 0 && lowercase(header[i]) == "id") {
            schema.columns.push_back(ColumnRole::Id);
        } else if (metric == Metric::Euclidean) {
            schema.columns.push_back(ColumnRole::Numeric);
        } else {
            schema.columns.push_back(text_role);
        }
    }
    schema.validate();
    return schema;
}

void DatasetSchema::validate() const {
    int ids = 0, data = 0;
    for (ColumnRole role : columns) {
        if (role == ColumnRole::Id) ++ids;
        if (role != ColumnRole::Id && role != ColumnRole::Ignore) ++data;
    }
    if (ids > 1) fail(ErrorCode::SchemaViolation, "more than one id column");
    if (data < 1) fail(ErrorCode::SchemaViolation, "no data columns");
}

Snapshot ingest_csv(std::istream& in, const DatasetSchema& schema) {
    schema.validate();
    std::vector<std::string> row;
    if (!read_csv_row(in, row)) return {};  // empty file: no header, no rows
    const std::size_t columns = schema.columns.size();
    if (row.size() != columns)
        fail(ErrorCode::SchemaViolation, "header has " + std::to_string(row.size()) +
                                             " columns, schema expects " +
                                             std::to_string(columns));

    Snapshot out;
    std::size_t line = 1;
    while (read_csv_row(in, row)) {
        ++line;
        if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
        if (row.size() != columns)
            fail(ErrorCode::SchemaViolation,
                 "row " + std::to_string(line) + " has " + std::to_string(row.size()) +
                     " columns, schema expects " + std::to_string(columns));
        ObjectRecord rec;
        rec.id = static_cast<ObjectId>(out.size() + 1);
        std::vector<double> numeric;
        for (std::size_t i = 0; i < columns; ++i) {
            const std::string& cell = row[i];
            switch (schema.columns[i]) {
                case ColumnRole::Id: {
                    try {
                        std::size_t used = 0;
                        rec.id = std::stoll(cell, &used);
                        if (used != cell.size()) throw std::invalid_argument(cell);
                    } catch (const std::exception&) {
                        fail(ErrorCode::SchemaViolation, "row " + std::to_string(line) +
                                                             " column " + std::to_string(i + 1) +
                                                             ": bad id '" + cell + "'");
                    }
                    break;
                }
                case ColumnRole::TokenText:
                    rec.attributes.push_back(make_token_set(tokenize(cell)));
                    break;
                case ColumnRole::TrigramText:
                    rec.attributes.push_back(TrigramText{lowercase(cell)});
                    break;
                case ColumnRole::RawString:
                    rec.attributes.push_back(RawText{lowercase(cell)});
                    break;
                case ColumnRole::Numeric: {
                    try {
                        std::size_t used = 0;
                        numeric.push_back(std::stod(cell, &used));
                        if (used != cell.size()) throw std::invalid_argument(cell);
                    } catch (const std::exception&) {
                        fail(ErrorCode::SchemaViolation, "row " + std::to_string(line) +
                                                             " column " + std::to_string(i + 1) +
                                                             ": bad numeric '" + cell + "'");
                    }
                    break;
                }
                case ColumnRole::Ignore:
                    break;
            }
        }
        if (!numeric.empty()) rec.attributes.push_back(NumericVector{std::move(numeric)});
        if (out.count(rec.id))
            fail(ErrorCode::DuplicateId, "row " + std::to_string(line) + ": id " +
                                             std::to_string(rec.id) + " repeats");
        out[rec.id] = std::move(rec);
    }
    return out;
}

Snapshot ingest_csv_file(const std::string& path, const DatasetSchema& schema) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    return ingest_csv(in, schema);
}

DupDistribution parse_distribution(const std::string& id) {
    if (id == "uniform") return DupDistribution::Uniform;
    if (id == "poisson") return DupDistribution::Poisson;
    if (id == "zipf") return DupDistribution::Zipf;
    fail(ErrorCode::InvalidDistributionParam, "unknown distribution '" + id + "'");
}

namespace {

const char* const kGivenNames[] = {
    "amelia", "bruno",  "carla",  "dmitri", "elena",  "felix",  "greta",  "hassan",
    "ingrid", "jonas",  "kirsty", "lukas",  "maria",  "nadia",  "oscar",  "priya",
    "quentin", "rosa",  "stefan", "tanya",  "umberto", "vera",  "wesley", "xenia",
    "yusuf",  "zofia",
};
const char* const kSurnames[] = {
    "abbott",  "becker",  "castillo", "dawson",   "eriksen", "fontaine", "gallagher",
    "hoffman", "ibarra",  "jensen",   "kowalski", "lindgren", "moreau",  "novak",
    "okafor",  "petrov",  "quirke",   "rossi",    "santos",  "takahashi", "unger",
    "vasquez", "werner",  "yamada",   "zimmer",
};
const char* const kStreets[] = {
    "maple street",  "oak avenue",   "cedar lane",  "birch road",   "willow court",
    "elm drive",     "aspen way",    "poplar place", "spruce close", "hazel crescent",
    "linden terrace", "juniper row", "chestnut walk", "laurel grove", "alder rise",
};

std::string attribute_to_text(const AttributeValue& value) {
    if (const auto* t = std::get_if<TokenSet>(&value)) {
        std::string out;
        for (const auto& tok : t->tokens) {
            if (!out.empty()) out.push_back(' ');
            out += tok;
        }
        return out;
    }
    if (const auto* t = std::get_if<TrigramText>(&value)) return t->value;
    if (const auto* t = std::get_if<RawText>(&value)) return t->value;
    fail(ErrorCode::InvalidArgument, "numeric attribute has no text form");
}

// Character-level edit: substitute, insert, or delete one character.
std::string char_edit(std::string s, Rng& rng) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz";
    if (s.empty()) return std::string(1, alphabet[rng.uniform_u64(26)]);
    const std::uint64_t mode = rng.uniform_u64(3);
    const std::size_t pos = static_cast<std::size_t>(rng.uniform_u64(s.size()));
    if (mode == 0) {
        s[pos] = alphabet[rng.uniform_u64(26)];
    } else if (mode == 1) {
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), alphabet[rng.uniform_u64(26)]);
    } else if (s.size() > 1) {
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
        s[0] = alphabet[rng.uniform_u64(26)];
    }
    return s;
}

std::string digit_edit(std::string s, Rng& rng) {
    if (s.empty()) return std::string(1, static_cast<char>('0' + rng.uniform_u64(10)));
    const std::size_t pos = static_cast<std::size_t>(rng.uniform_u64(s.size()));
    s[pos] = static_cast<char>('0' + rng.uniform_u64(10));
    return s;
}

std::string token_swap(const std::string& s, Rng& rng) {
    std::vector<std::string> tokens = tokenize(s);
    if (tokens.size() < 2) return s;
    const std::size_t i = static_cast<std::size_t>(rng.uniform_u64(tokens.size()));
    std::size_t j = static_cast<std::size_t>(rng.uniform_u64(tokens.size() - 1));
    if (j >= i) ++j;
    std::swap(tokens[i], tokens[j]);
    std::string out;
    for (const auto& tok : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += tok;
    }
    return out;
}

std::string truncate_field(const std::string& s, Rng& rng) {
    if (s.size() < 3) return s;
    const std::size_t keep = s.size() - 1 - static_cast<std::size_t>(
                                                rng.uniform_u64(std::min<std::size_t>(3, s.size() - 2)));
    return s.substr(0, keep);
}

AttributeValue corrupt_attribute(const AttributeValue& value, Rng& rng) {
    if (const auto* nv = std::get_if<NumericVector>(&value)) {
        NumericVector out = *nv;
        if (!out.values.empty()) {
            const std::size_t i = static_cast<std::size_t>(rng.uniform_u64(out.values.size()));
            out.values[i] += rng.gaussian() * 0.1 * (std::abs(out.values[i]) + 1.0);
        }
        return out;
    }
    const std::string text = attribute_to_text(value);
    std::string corrupted;
    const bool digits = !text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    });
    const std::uint64_t op = rng.uniform_u64(3);
    if (digits) {
        corrupted = digit_edit(text, rng);
    } else if (op == 0) {
        corrupted = char_edit(text, rng);
    } else if (op == 1) {
        corrupted = token_swap(text, rng);
    } else {
        corrupted = truncate_field(text, rng);
    }
    if (std::holds_alternative<TokenSet>(value)) return make_token_set(tokenize(corrupted));
    if (std::holds_alternative<TrigramText>(value)) return TrigramText{corrupted};
    return RawText{corrupted};
}

ObjectRecord make_original(ObjectId id, Rng& rng) {
    ObjectRecord rec;
    rec.id = id;
    const std::string given = kGivenNames[rng.uniform_u64(std::size(kGivenNames))];
    const std::string surname = kSurnames[rng.uniform_u64(std::size(kSurnames))];
    rec.attributes.push_back(make_token_set({given, surname}));
    std::string address = std::to_string(1 + rng.uniform_u64(999)) + " " +
                          kStreets[rng.uniform_u64(std::size(kStreets))];
    rec.attributes.push_back(RawText{std::move(address)});
    std::string phone;
    for (int i = 0; i < 8; ++i) phone.push_back(static_cast<char>('0' + rng.uniform_u64(10)));
    rec.attributes.push_back(RawText{std::move(phone)});
    return rec;
}

}  // namespace

SyntheticDataset generate_synthetic(const GeneratorConfig& config, Rng& rng) {
    if (config.min_corruptions < 1 || config.max_corruptions < config.min_corruptions)
        fail(ErrorCode::InvalidArgument, "bad corruption bounds");

    SyntheticDataset out;
    std::vector<ObjectId> original_ids;
    original_ids.reserve(config.n_originals);
    for (std::size_t i = 0; i < config.n_originals; ++i) {
        const ObjectId id = static_cast<ObjectId>(i + 1);
        out.records[id] = make_original(id, rng);
        original_ids.push_back(id);
    }

    if (config.n_duplicates == 0) return out;
    if (config.n_originals == 0)
        fail(ErrorCode::InvalidArgument, "duplicates need at least one original");

    // Per-original target counts from the chosen distribution, then adjusted
    // to the exact requested total.
    std::vector<std::uint64_t> counts(config.n_originals, 0);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < config.n_originals; ++i) {
        std::uint64_t c = 0;
        switch (config.distribution) {
            case DupDistribution::Uniform:
                c = rng.uniform_u64(config.uniform_max + 1);
                break;
            case DupDistribution::Poisson:
                c = rng.poisson(config.poisson_lambda);
                break;
            case DupDistribution::Zipf:
                c = rng.zipf(config.zipf_s, config.zipf_max);
                break;
        }
        counts[i] = c;
        total += c;
    }
    while (total < config.n_duplicates) {
        ++counts[rng.uniform_u64(config.n_originals)];
        ++total;
    }
    while (total > config.n_duplicates) {
        const std::size_t i = static_cast<std::size_t>(rng.uniform_u64(config.n_originals));
        if (counts[i] > 0) {
            --counts[i];
            --total;
        }
    }

    ObjectId next_id = static_cast<ObjectId>(config.n_originals + 1);
    for (std::size_t i = 0; i < config.n_originals; ++i) {
        for (std::uint64_t d = 0; d < counts[i]; ++d) {
            ObjectRecord dup = out.records.at(original_ids[i]);
            dup.id = next_id;
            const int edits =
                config.min_corruptions +
                static_cast<int>(rng.uniform_u64(
                    static_cast<std::uint64_t>(config.max_corruptions - config.min_corruptions) +
                    1));
            for (int e = 0; e < edits; ++e) {
                const std::size_t attr =
                    static_cast<std::size_t>(rng.uniform_u64(dup.attributes.size()));
                dup.attributes[attr] = corrupt_attribute(dup.attributes[attr], rng);
            }
            out.origin_of[next_id] = original_ids[i];
            out.records[next_id] = std::move(dup);
            ++next_id;
        }
    }
    return out;
}

ObjectRecord corrupt_record(const ObjectRecord& rec, Rng& rng) {
    ObjectRecord out = rec;
    if (out.attributes.empty()) return out;
    const int fields = 1 + static_cast<int>(rng.uniform_u64(2));  // 1-2 attribute values
    for (int i = 0; i < fields; ++i) {
        const std::size_t attr = static_cast<std::size_t>(rng.uniform_u64(out.attributes.size()));
        out.attributes[attr] = corrupt_attribute(out.attributes[attr], rng);
    }
    return out;
}

WorkloadConfig WorkloadConfig::parse(const std::string& text) {
    WorkloadConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t uniform_rounds = 0;
    RoundCounts uniform{};
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::istringstream key_in(line.substr(0, eq));
        std::string key;
        key_in >> key;
        std::istringstream val(line.substr(eq + 1));
        if (key == "initial") {
            val >> config.initial_count;
        } else if (key == "seed") {
            val >> config.seed;
        } else if (key == "rounds") {
            val >> uniform_rounds;
        } else if (key == "adds") {
            val >> uniform.adds;
        } else if (key == "removes") {
            val >> uniform.removes;
        } else if (key == "updates") {
            val >> uniform.updates;
        } else if (key == "round") {
            RoundCounts rc;
            val >> rc.adds >> rc.removes >> rc.updates;
            config.rounds.push_back(rc);
        } else if (!key.empty()) {
            fail(ErrorCode::InvalidArgument, "unknown workload key '" + key + "'");
        }
    }
    if (config.rounds.empty() && uniform_rounds > 0)
        config.rounds.assign(uniform_rounds, uniform);
    return config;
}

std::string WorkloadConfig::serialize() const {
    std::ostringstream out;
    out << "initial = " << initial_count << "\n";
    out << "seed = " << seed << "\n";
    for (const auto& rc : rounds)
        out << "round = " << rc.adds << " " << rc.removes << " " << rc.updates << "\n";
    return out.str();
}

Workload drive_workload(const Snapshot& pool, const WorkloadConfig& config) {
    if (config.initial_count > pool.size())
        fail(ErrorCode::Exhausted, "initial count exceeds the pool");

    std::vector<ObjectId> ids;
    ids.reserve(pool.size());
    for (const auto& [id, _] : pool) ids.push_back(id);

    Rng rng(config.seed);
    rng.shuffle(ids);

    Workload out;
    std::vector<ObjectId> live;
    for (std::size_t i = 0; i < config.initial_count; ++i) {
        out.initial[ids[i]] = pool.at(ids[i]);
        live.push_back(ids[i]);
    }
    std::size_t next_unused = config.initial_count;
    std::sort(live.begin(), live.end());

    Snapshot current = out.initial;
    for (std::size_t r = 0; r < config.rounds.size(); ++r) {
        const auto& rc = config.rounds[r];
        RoundPlan plan;
        plan.round = static_cast<int>(r + 1);

        if (next_unused + rc.adds > ids.size())
            fail(ErrorCode::Exhausted, "pool exhausted at round " + std::to_string(r + 1));
        if (rc.removes + rc.updates > live.size())
            fail(ErrorCode::Exhausted, "live set exhausted at round " + std::to_string(r + 1));

        // Distinct victims for removes and updates.
        std::vector<ObjectId> victims = live;
        rng.shuffle(victims);
        std::size_t v = 0;

        for (std::size_t i = 0; i < rc.adds; ++i) {
            const ObjectId id = ids[next_unused++];
            plan.operations.push_back(DataOperation::add(pool.at(id)));
        }
        for (std::size_t i = 0; i < rc.removes; ++i)
            plan.operations.push_back(DataOperation::remove(victims[v++]));
        for (std::size_t i = 0; i < rc.updates; ++i) {
            const ObjectId id = victims[v++];
            plan.operations.push_back(DataOperation::update(corrupt_record(current.at(id), rng)));
        }
        plan.validate();

        for (const auto& op : plan.operations) {
            switch (op.kind) {
                case OpKind::Add:
                    current[op.id()] = op.record;
                    live.push_back(op.id());
                    break;
                case OpKind::Remove:
                    current.erase(op.id());
                    live.erase(std::find(live.begin(), live.end(), op.id()));
                    break;
                case OpKind::Update:
                    current[op.id()] = op.record;
                    break;
            }
        }
        std::sort(live.begin(), live.end());
        out.rounds.push_back(std::move(plan));
    }
    return out;
}

}  // namespace dyncluster
