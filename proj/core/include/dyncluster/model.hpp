#pragma once

#include <deque>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dyncluster/clustering.hpp"
#include "dyncluster/evolution.hpp"
#include "dyncluster/features.hpp"
#include "dyncluster/rng.hpp"
#include "dyncluster/similarity_graph.hpp"

namespace dyncluster {

// Dependency-free binary logistic regression, fit by full-batch gradient
// descent (learning rate 0.1, at most 5000 iterations, stop when the mean
// log-loss improves by less than 1e-8). Deterministic for a fixed input.
class LogisticRegression {
public:
    struct FitResult {
        int iterations = 0;
        double final_loss = 0.0;
    };

    FitResult fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y);

    double probability(const std::vector<double>& x) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    void set_parameters(std::vector<double> weights, double bias);

    static constexpr double kLearningRate = 0.1;
    static constexpr int kMaxIterations = 5000;
    static constexpr double kLossTolerance = 1e-8;

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
};

// Labeled feature store with oldest-first eviction. Fit-time draws use the
// most recent min(|pos|,|neg|) samples of each class so the training set is
// always balanced.
class SampleStore {
public:
    explicit SampleStore(std::size_t capacity = 20000) : capacity_(capacity) {}

    void add_positive(FeatureVector f);
    void add_negative(FeatureVector f);

    std::size_t positive_count() const { return positives_.size(); }
    std::size_t negative_count() const { return negatives_.size(); }
    std::size_t capacity() const { return capacity_; }

    // Most recent n of each class, n = min(|pos|,|neg|); positives first.
    std::vector<FeatureVector> training_set() const;

    const std::deque<FeatureVector>& positives() const { return positives_; }
    const std::deque<FeatureVector>& negatives() const { return negatives_; }

private:
    void evict();

    std::size_t capacity_;
    std::deque<FeatureVector> positives_;
    std::deque<FeatureVector> negatives_;
};

// Affine per-feature transform fixed at fit time: d1 and d2 pass through,
// sizes go through log1p then min-max scaling over the training set.
struct FeatureNormalization {
    double d3_min = 0.0, d3_max = 1.0;
    double d4_min = 0.0, d4_max = 1.0;

    std::vector<double> apply(const FeatureVector& f) const;
};

class TrainedModel {
public:
    TrainedModel() = default;

    ModelKind kind() const { return kind_; }
    double theta() const { return theta_; }
    void set_theta(double theta);

    // probability = sigmoid(w . normalize(f) + b); label = 1 iff p >= theta.
    double probability(const FeatureVector& f) const;
    std::pair<int, double> predict(const FeatureVector& f) const;

    const LogisticRegression& regression() const { return lr_; }
    const FeatureNormalization& normalization() const { return norm_; }

    // Model that predicts 1 for everything; stands in before any positive
    // split samples exist, leaving filtering to the objective gate.
    static TrainedModel permissive(ModelKind kind);
    static TrainedModel from_parameters(ModelKind kind, std::vector<double> weights, double bias,
                                        FeatureNormalization norm, double theta);

    void save(std::ostream& out) const;
    static TrainedModel load(std::istream& in);

    friend TrainedModel fit(const SampleStore& store, ModelKind kind);

private:
    ModelKind kind_ = ModelKind::Merge;
    LogisticRegression lr_;
    FeatureNormalization norm_;
    double theta_ = 0.5;
};

// Fits a calibrated logistic model from the store; requires at least one
// positive and one negative sample.
TrainedModel fit(const SampleStore& store, ModelKind kind);

// Minimal predicted probability over the store's positive training samples;
// thresholding there makes training recall exactly 1.
double calibrate_theta(const TrainedModel& model, const SampleStore& store);

// Merge-model probability for the hypothetical union of c1 and c2, computed
// on a scratch view.
double merge_probability_after(const TrainedModel& model, const Clustering& clustering,
                               const SimilarityGraph& g, ClusterId c1, ClusterId c2);

// One round's worth of harvesting context: the steps the batch run (or the
// cross-round derivation) accepted, the clustering and graph at round end,
// and the ids this round's operations touched.
struct HarvestInput {
    const std::vector<EvolutionStep>* steps = nullptr;
    const Clustering* clustering = nullptr;
    const SimilarityGraph* graph = nullptr;
    std::set<ObjectId> touched;
};

// Positive/negative weights for the active-component sampling of negatives.
struct SamplingWeights {
    double active = 0.7;
    double inactive = 0.3;
};

// Harvests one round into the two stores. Positives are the feature vectors
// riding on the steps; negatives are end-of-round clusters that no step
// touched, drawn (weighted, without replacement) until they match the round's
// positive count per model.
void harvest_samples(const HarvestInput& input, SampleStore& merge_store,
                     SampleStore& split_store, Rng& rng,
                     const SamplingWeights& weights = {});

// Accuracy and recall of a model over its own (balanced) training set.
struct TrainingReport {
    std::size_t samples = 0;
    double accuracy = 0.0;
    double recall = 0.0;
};

TrainingReport training_report(const TrainedModel& model, const SampleStore& store);

// Confusion-matrix metrics for binary classifiers.
struct ClassifierMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

ClassifierMetrics classifier_metrics(std::size_t tp, std::size_t fn, std::size_t fp,
                                     std::size_t tn);

}  // namespace dyncluster
