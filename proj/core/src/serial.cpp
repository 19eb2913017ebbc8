#include "dyncluster/serial.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dyncluster/error.hpp"

namespace dyncluster {

using json = nlohmann::ordered_json;

namespace {

json attribute_to_json(const AttributeValue& value) {
    json j;
    if (const auto* t = std::get_if<TokenSet>(&value)) {
        j["t"] = "tokens";
        j["v"] = t->tokens;
    } else if (const auto* t = std::get_if<TrigramText>(&value)) {
        j["t"] = "trigram";
        j["v"] = t->value;
    } else if (const auto* t = std::get_if<NumericVector>(&value)) {
        j["t"] = "vec";
        j["v"] = t->values;
    } else {
        j["t"] = "str";
        j["v"] = std::get<RawText>(value).value;
    }
    return j;
}

AttributeValue attribute_from_json(const json& j) {
    const std::string type = j.at("t").get<std::string>();
    if (type == "tokens") return TokenSet{j.at("v").get<std::vector<std::string>>()};
    if (type == "trigram") return TrigramText{j.at("v").get<std::string>()};
    if (type == "vec") return NumericVector{j.at("v").get<std::vector<double>>()};
    if (type == "str") return RawText{j.at("v").get<std::string>()};
    fail(ErrorCode::IoError, "unknown attribute type '" + type + "'");
}

json record_to_json(const ObjectRecord& rec) {
    json j;
    j["id"] = rec.id;
    j["attrs"] = json::array();
    for (const auto& a : rec.attributes) j["attrs"].push_back(attribute_to_json(a));
    return j;
}

ObjectRecord record_from_json(const json& j) {
    ObjectRecord rec;
    rec.id = j.at("id").get<ObjectId>();
    for (const auto& a : j.at("attrs")) rec.attributes.push_back(attribute_from_json(a));
    return rec;
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::IoError, std::string("malformed JSON in ") + what);
    return j;
}

}  // namespace

std::string serialize_state(const ClusteringState& state) {
    json j;
    j["version"] = 1;
    j["similarity"] = {{"metric", metric_id(state.params.metric)},
                       {"scale", state.params.euclidean_scale},
                       {"prune_threshold", state.params.prune_threshold}};
    j["records"] = json::array();
    for (const auto& [id, rec] : state.records) j["records"].push_back(record_to_json(rec));
    j["edges"] = json::array();
    for (ObjectId a : state.graph.node_ids()) {
        for (const auto& [b, w] : state.graph.neighbors(a)) {
            if (b > a) j["edges"].push_back(json::array({a, b, w}));
        }
    }
    j["clusters"] = json::object();
    for (const auto& [c, members] : state.clustering.clusters())
        j["clusters"][std::to_string(c)] = members;
    j["next_cluster_id"] = state.clustering.next_cluster_id();
    return j.dump(2) + "\n";
}

ClusteringState parse_state(const std::string& text) {
    const json j = parse_json(text, "state");
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        fail(ErrorCode::IoError, "unsupported state version");
    ClusteringState state;
    const auto& sim = j.at("similarity");
    state.params.metric = parse_metric(sim.at("metric").get<std::string>());
    state.params.euclidean_scale = sim.at("scale").get<double>();
    state.params.prune_threshold = sim.at("prune_threshold").get<double>();
    for (const auto& r : j.at("records")) {
        ObjectRecord rec = record_from_json(r);
        const ObjectId id = rec.id;
        if (state.records.count(id)) fail(ErrorCode::DuplicateId, std::to_string(id));
        state.records[id] = std::move(rec);
        state.graph.add_node(id);
    }
    for (const auto& e : j.at("edges")) {
        state.graph.set_edge(e.at(0).get<ObjectId>(), e.at(1).get<ObjectId>(),
                             e.at(2).get<double>());
    }
    std::map<ClusterId, std::vector<ObjectId>> clusters;
    for (const auto& [key, members] : j.at("clusters").items())
        clusters[std::stoll(key)] = members.get<std::vector<ObjectId>>();
    state.clustering = Clustering::from_clusters(clusters, state.graph);
    if (j.contains("next_cluster_id")) {
        const ClusterId next = j.at("next_cluster_id").get<ClusterId>();
        if (next > state.clustering.next_cluster_id())
            state.clustering.set_next_cluster_id(next);
    }
    for (const auto& [id, rec] : state.records) {
        if (!state.clustering.contains_object(id))
            fail(ErrorCode::InconsistentPartitions,
                 "record " + std::to_string(id) + " is not clustered");
    }
    if (state.clustering.object_count() != state.records.size())
        fail(ErrorCode::InconsistentPartitions, "clustering covers unknown ids");
    return state;
}

void save_state_file(const ClusteringState& state, const std::string& path) {
    write_text_file(path, serialize_state(state));
}

ClusteringState load_state_file(const std::string& path) {
    return parse_state(read_text_file(path));
}

std::string serialize_round(const RoundPlan& plan) {
    json j;
    j["round"] = plan.round;
    j["adds"] = json::array();
    j["removes"] = json::array();
    j["updates"] = json::array();
    for (const auto& op : plan.operations) {
        switch (op.kind) {
            case OpKind::Add: j["adds"].push_back(record_to_json(op.record)); break;
            case OpKind::Remove: j["removes"].push_back(op.id()); break;
            case OpKind::Update: j["updates"].push_back(record_to_json(op.record)); break;
        }
    }
    return j.dump();
}

RoundPlan parse_round(const std::string& text) {
    const json j = parse_json(text, "round");
    RoundPlan plan;
    plan.round = j.value("round", 0);
    for (const auto& r : j.at("adds")) plan.operations.push_back(DataOperation::add(record_from_json(r)));
    for (const auto& id : j.at("removes"))
        plan.operations.push_back(DataOperation::remove(id.get<ObjectId>()));
    for (const auto& r : j.at("updates"))
        plan.operations.push_back(DataOperation::update(record_from_json(r)));
    plan.validate();
    return plan;
}

void save_rounds_file(const std::vector<RoundPlan>& rounds, const std::string& path) {
    std::ostringstream out;
    for (const auto& plan : rounds) out << serialize_round(plan) << "\n";
    write_text_file(path, out.str());
}

std::vector<RoundPlan> load_rounds_file(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<RoundPlan> rounds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        rounds.push_back(parse_round(line));
    }
    return rounds;
}

std::string serialize_step(const EvolutionStep& step) {
    json j;
    j["kind"] = step.kind == EvolutionKind::Merge ? "merge" : "split";
    j["inputs"] = step.inputs;
    j["outputs"] = step.outputs;
    j["round"] = step.round;
    j["features"] = json::array();
    for (const auto& f : step.features) j["features"].push_back(f.values());
    return j.dump();
}

EvolutionStep parse_step(const std::string& line) {
    const json j = parse_json(line, "trace step");
    EvolutionStep step;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "merge")
        step.kind = EvolutionKind::Merge;
    else if (kind == "split")
        step.kind = EvolutionKind::Split;
    else
        fail(ErrorCode::IoError, "unknown step kind '" + kind + "'");
    step.inputs = j.at("inputs").get<std::vector<std::vector<ObjectId>>>();
    step.outputs = j.at("outputs").get<std::vector<std::vector<ObjectId>>>();
    step.round = j.value("round", 0);
    for (const auto& row : j.at("features")) {
        const auto values = row.get<std::vector<double>>();
        FeatureVector f;
        f.kind = step.kind == EvolutionKind::Merge ? ModelKind::Merge : ModelKind::Split;
        if (values.size() != (f.kind == ModelKind::Merge ? 4u : 3u))
            fail(ErrorCode::IoError, "feature arity mismatch in trace step");
        f.d1 = values[0];
        f.d2 = values[1];
        f.d3 = values[2];
        if (values.size() == 4) f.d4 = values[3];
        step.features.push_back(f);
    }
    step.validate();
    return step;
}

void save_trace_file(const std::vector<EvolutionStep>& steps, const std::string& path) {
    std::ostringstream out;
    for (const auto& step : steps) out << serialize_step(step) << "\n";
    write_text_file(path, out.str());
}

std::vector<EvolutionStep> load_trace_file(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<EvolutionStep> steps;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        steps.push_back(parse_step(line));
    }
    return steps;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << content;
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace dyncluster
