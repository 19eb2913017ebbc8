#include "dyncluster/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "dyncluster/error.hpp"

namespace dyncluster {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double log1p_exp(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

}  // namespace

LogisticRegression::FitResult LogisticRegression::fit(const std::vector<std::vector<double>>& x,
                                                      const std::vector<int>& y) {
    if (x.empty() || x.size() != y.size())
        fail(ErrorCode::InsufficientData, "empty or mismatched training data");
    const std::size_t n = x.size();
    const std::size_t dim = x[0].size();
    for (const auto& row : x)
        if (row.size() != dim) fail(ErrorCode::DimensionMismatch, "ragged feature rows");

    weights_.assign(dim, 0.0);
    bias_ = 0.0;

    std::vector<double> grad(dim);
    double prev_loss = std::numeric_limits<double>::infinity();
    FitResult result;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = bias_;
            for (std::size_t j = 0; j < dim; ++j) z += weights_[j] * x[i][j];
            const double p = sigmoid(z);
            const double err = p - static_cast<double>(y[i]);
            for (std::size_t j = 0; j < dim; ++j) grad[j] += err * x[i][j];
            grad_bias += err;
            // Mean negative log-likelihood: log(1+e^z) - y*z.
            loss += log1p_exp(z) - static_cast<double>(y[i]) * z;
        }
        loss /= static_cast<double>(n);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < dim; ++j) weights_[j] -= kLearningRate * grad[j] * inv_n;
        bias_ -= kLearningRate * grad_bias * inv_n;
        result.iterations = iter + 1;
        result.final_loss = loss;
        if (prev_loss - loss < kLossTolerance && iter > 0) break;
        prev_loss = loss;
    }
    return result;
}

double LogisticRegression::probability(const std::vector<double>& x) const {
    if (x.size() != weights_.size())
        fail(ErrorCode::ArityMismatch, std::to_string(x.size()) + " features, model has " +
                                           std::to_string(weights_.size()));
    double z = bias_;
    for (std::size_t j = 0; j < x.size(); ++j) z += weights_[j] * x[j];
    return sigmoid(z);
}

void LogisticRegression::set_parameters(std::vector<double> weights, double bias) {
    weights_ = std::move(weights);
    bias_ = bias;
}

void SampleStore::add_positive(FeatureVector f) {
    f.label = 1;
    positives_.push_back(std::move(f));
    evict();
}

void SampleStore::add_negative(FeatureVector f) {
    f.label = 0;
    negatives_.push_back(std::move(f));
    evict();
}

void SampleStore::evict() {
    while (positives_.size() + negatives_.size() > capacity_) {
        if (negatives_.size() >= positives_.size() && !negatives_.empty())
            negatives_.pop_front();
        else
            positives_.pop_front();
    }
}

std::vector<FeatureVector> SampleStore::training_set() const {
    const std::size_t n = std::min(positives_.size(), negatives_.size());
    std::vector<FeatureVector> out;
    out.reserve(2 * n);
    out.insert(out.end(), positives_.end() - static_cast<std::ptrdiff_t>(n), positives_.end());
    out.insert(out.end(), negatives_.end() - static_cast<std::ptrdiff_t>(n), negatives_.end());
    return out;
}

std::vector<double> FeatureNormalization::apply(const FeatureVector& f) const {
    auto scale = [](double v, double lo, double hi) {
        const double t = std::log1p(v);
        return hi > lo ? (t - lo) / (hi - lo) : 0.0;
    };
    if (f.kind == ModelKind::Merge)
        return {f.d1, f.d2, scale(f.d3, d3_min, d3_max), scale(f.d4, d4_min, d4_max)};
    return {f.d1, f.d2, scale(f.d3, d3_min, d3_max)};
}

void TrainedModel::set_theta(double theta) {
    if (!(theta > 0.0) || theta > 1.0) fail(ErrorCode::InvalidArgument, "theta must be in (0,1]");
    theta_ = theta;
}

double TrainedModel::probability(const FeatureVector& f) const {
    if (f.kind != kind_) fail(ErrorCode::ArityMismatch, "feature vector kind differs from model");
    return lr_.probability(norm_.apply(f));
}

std::pair<int, double> TrainedModel::predict(const FeatureVector& f) const {
    const double p = probability(f);
    return {p >= theta_ ? 1 : 0, p};
}

TrainedModel TrainedModel::permissive(ModelKind kind) {
    TrainedModel m;
    m.kind_ = kind;
    m.lr_.set_parameters(std::vector<double>(kind == ModelKind::Merge ? 4 : 3, 0.0), 37.0);
    m.theta_ = 0.5;
    return m;
}

TrainedModel TrainedModel::from_parameters(ModelKind kind, std::vector<double> weights,
                                           double bias, FeatureNormalization norm, double theta) {
    const std::size_t expected = kind == ModelKind::Merge ? 4 : 3;
    if (weights.size() != expected)
        fail(ErrorCode::ArityMismatch, "expected " + std::to_string(expected) + " weights");
    TrainedModel m;
    m.kind_ = kind;
    m.lr_.set_parameters(std::move(weights), bias);
    m.norm_ = norm;
    m.set_theta(theta);
    return m;
}

TrainedModel fit(const SampleStore& store, ModelKind kind) {
    if (store.positive_count() == 0 || store.negative_count() == 0)
        fail(ErrorCode::InsufficientData, "need at least one positive and one negative sample");

    const auto samples = store.training_set();

    TrainedModel model;
    model.kind_ = kind;

    double lo3 = std::numeric_limits<double>::infinity(), hi3 = -lo3;
    double lo4 = std::numeric_limits<double>::infinity(), hi4 = -lo4;
    for (const auto& f : samples) {
        lo3 = std::min(lo3, std::log1p(f.d3));
        hi3 = std::max(hi3, std::log1p(f.d3));
        lo4 = std::min(lo4, std::log1p(f.d4));
        hi4 = std::max(hi4, std::log1p(f.d4));
    }
    model.norm_ = FeatureNormalization{lo3, hi3, lo4, hi4};

    std::vector<std::vector<double>> x;
    std::vector<int> y;
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& f : samples) {
        FeatureVector g = f;
        g.kind = kind;
        x.push_back(model.norm_.apply(g));
        y.push_back(f.label);
    }
    model.lr_.fit(x, y);
    model.theta_ = calibrate_theta(model, store);
    return model;
}

double calibrate_theta(const TrainedModel& model, const SampleStore& store) {
    if (store.positive_count() == 0)
        fail(ErrorCode::InsufficientData, "calibration needs at least one positive sample");
    const auto samples = store.training_set();
    double theta = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& f : samples) {
        if (f.label != 1) continue;
        FeatureVector g = f;
        g.kind = model.kind();
        theta = std::min(theta, model.probability(g));
        any = true;
    }
    if (!any) {
        // Balanced draw came up empty (no negatives stored yet): calibrate
        // over all stored positives instead.
        for (const auto& f : store.positives()) {
            FeatureVector g = f;
            g.kind = model.kind();
            theta = std::min(theta, model.probability(g));
        }
    }
    return theta;
}

double merge_probability_after(const TrainedModel& model, const Clustering& clustering,
                               const SimilarityGraph& g, ClusterId c1, ClusterId c2) {
    if (model.kind() != ModelKind::Merge)
        fail(ErrorCode::ArityMismatch, "merge_probability_after needs a merge model");
    if (c1 == c2) fail(ErrorCode::InvalidArgument, "c1 == c2");
    const FeatureVector f = features_of_merged(c1, c2, clustering, g, ModelKind::Merge);
    return model.probability(f);
}

namespace {

std::string canonical_key(const std::vector<ObjectId>& members) {
    std::string key;
    for (ObjectId m : members) {
        key += std::to_string(m);
        key.push_back(',');
    }
    return key;
}

}  // namespace

void harvest_samples(const HarvestInput& input, SampleStore& merge_store,
                     SampleStore& split_store, Rng& rng, const SamplingWeights& weights) {
    if (!input.steps || !input.clustering || !input.graph)
        fail(ErrorCode::InvalidArgument, "harvest input is incomplete");

    // Positives: feature vectors riding on the steps. A cluster counts as
    // changed when it was the input of some step; a step output that is
    // never consumed again stayed unchanged from then on.
    std::size_t merge_pos = 0, split_pos = 0;
    std::set<std::string> stepped;
    for (const auto& step : *input.steps) {
        for (const auto& in : step.inputs) stepped.insert(canonical_key(in));
        if (step.kind == EvolutionKind::Merge) {
            for (const auto& f : step.features) {
                merge_store.add_positive(f);
                ++merge_pos;
            }
        } else {
            for (const auto& f : step.features) {
                split_store.add_positive(f);
                ++split_pos;
            }
        }
    }

    // Negative pool: end-of-round clusters untouched by any step, weighted by
    // whether their graph component contains a touched object.
    const auto components = input.graph->connected_components();
    std::set<int> active_components;
    for (ObjectId id : input.touched) {
        auto it = components.find(id);
        if (it != components.end()) active_components.insert(it->second);
    }

    std::vector<ClusterId> pool;
    std::vector<double> pool_weights;
    for (const auto& [c, members] : input.clustering->clusters()) {
        if (stepped.count(canonical_key(members))) continue;
        bool active = false;
        for (ObjectId m : members) {
            auto it = components.find(m);
            if (it != components.end() && active_components.count(it->second)) {
                active = true;
                break;
            }
        }
        pool.push_back(c);
        pool_weights.push_back(active ? weights.active : weights.inactive);
    }

    auto draw = [&](std::size_t want, ModelKind kind, SampleStore& store) {
        std::vector<ClusterId> ids = pool;
        std::vector<double> w = pool_weights;
        std::size_t drawn = 0;
        while (drawn < want && !ids.empty()) {
            double total = 0.0;
            for (double v : w) total += v;
            if (!(total > 0.0)) break;
            const std::size_t i = rng.weighted_index(w);
            store.add_negative(extract_features(ids[i], *input.clustering, *input.graph, kind));
            ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(i));
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
            ++drawn;
        }
    };
    draw(merge_pos, ModelKind::Merge, merge_store);
    draw(split_pos, ModelKind::Split, split_store);
}

TrainingReport training_report(const TrainedModel& model, const SampleStore& store) {
    const auto samples = store.training_set();
    TrainingReport report;
    report.samples = samples.size();
    if (samples.empty()) return report;
    std::size_t correct = 0, tp = 0, pos = 0;
    for (const auto& f : samples) {
        FeatureVector g = f;
        g.kind = model.kind();
        const auto [label, p] = model.predict(g);
        (void)p;
        if (label == f.label) ++correct;
        if (f.label == 1) {
            ++pos;
            if (label == 1) ++tp;
        }
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
    report.recall = pos == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(pos);
    return report;
}

ClassifierMetrics classifier_metrics(std::size_t tp, std::size_t fn, std::size_t fp,
                                     std::size_t tn) {
    ClassifierMetrics m;
    const double total = static_cast<double>(tp + fn + fp + tn);
    m.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 1.0;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    return m;
}

namespace {

const char* kind_name(ModelKind k) { return k == ModelKind::Merge ? "merge" : "split"; }

}  // namespace

void TrainedModel::save(std::ostream& out) const {
    out.precision(17);
    out << "dyncluster-model v1\n";
    out << "kind " << kind_name(kind_) << "\n";
    out << "weights";
    for (double w : lr_.weights()) out << " " << w;
    out << "\n";
    out << "bias " << lr_.bias() << "\n";
    out << "norm " << norm_.d3_min << " " << norm_.d3_max << " " << norm_.d4_min << " "
        << norm_.d4_max << "\n";
    out << "theta " << theta_ << "\n";
}

TrainedModel TrainedModel::load(std::istream& in) {
    std::string header, version;
    in >> header >> version;
    if (header != "dyncluster-model" || version != "v1")
        fail(ErrorCode::IoError, "not a dyncluster model file");
    TrainedModel m;
    std::string key;
    while (in >> key) {
        if (key == "kind") {
            std::string k;
            in >> k;
            if (k == "merge")
                m.kind_ = ModelKind::Merge;
            else if (k == "split")
                m.kind_ = ModelKind::Split;
            else
                fail(ErrorCode::IoError, "bad model kind '" + k + "'");
        } else if (key == "weights") {
            std::vector<double> w(m.kind_ == ModelKind::Merge ? 4 : 3);
            for (double& v : w) in >> v;
            m.lr_.set_parameters(std::move(w), m.lr_.bias());
        } else if (key == "bias") {
            double b;
            in >> b;
            m.lr_.set_parameters(std::vector<double>(m.lr_.weights()), b);
        } else if (key == "norm") {
            in >> m.norm_.d3_min >> m.norm_.d3_max >> m.norm_.d4_min >> m.norm_.d4_max;
        } else if (key == "theta") {
            in >> m.theta_;
        } else {
            fail(ErrorCode::IoError, "unknown model key '" + key + "'");
        }
    }
    if (!in.eof() && in.fail()) fail(ErrorCode::IoError, "malformed model file");
    return m;
}

}  // namespace dyncluster
