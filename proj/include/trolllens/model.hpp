#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trolllens/features.hpp"
#include "trolllens/matrix.hpp"

namespace trolllens {

// Per-feature standardization fitted on training folds. Features with
// zero std pass through as 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> std_dev; // 0 marks a constant feature

    void fit(const Matrix& x);
    void transform(Matrix& x) const;
    void transform_row(std::span<double> row) const;
    nlohmann::ordered_json to_json() const;
    static Standardizer from_json(const nlohmann::ordered_json& j);
};

struct LogRegOptions {
    double l2_lambda = 1.0;
    double learning_rate = 0.1;
    int max_iter = 1000;
    double tol = 1e-6;
    std::uint64_t seed = 0; // zero init makes training seed-free; kept for the record
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    double l2_lambda = 0.0;
    std::uint64_t schema_hash = 0;
    std::uint64_t seed = 0;
    int iterations_run = 0;
    double final_loss = 0.0;

    nlohmann::ordered_json to_json() const;
    static LogRegModel from_json(const nlohmann::ordered_json& j);
};

// Mean cross-entropy + (lambda/2)*||w||^2 (bias unregularized) and its
// gradient. Exposed for the finite-difference checks.
double logreg_loss(const Matrix& x, std::span<const int> y, double l2_lambda,
                   std::span<const double> weights, double bias);
void logreg_gradient(const Matrix& x, std::span<const int> y, double l2_lambda,
                     std::span<const double> weights, double bias, std::span<double> grad_w,
                     double& grad_b);

// Full-batch gradient descent from zero init; stops at max_iter or when
// the gradient infinity-norm drops below tol. Steps that would increase
// the loss are halved, so the loss sequence is non-increasing. Errors:
// DegenerateLabels, NonFiniteFeature.
LogRegModel train(const Matrix& x, std::span<const int> y, const LogRegOptions& options = {});

double predict_proba(const LogRegModel& model, std::span<const double> x);
int classify(const LogRegModel& model, std::span<const double> x, double threshold = 0.5);

// Stratified k folds: per-class shuffle then round-robin deal, so every
// fold's class counts differ from the ideal by at most one.
// Errors: TooFewMinority when either class has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, int k,
                                                       std::uint64_t seed);

struct MacroMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Macro precision/recall/F1 over the two classes; per-class 0/0 counts
// as 0. Errors: LengthMismatch.
MacroMetrics evaluate(std::span<const int> y_true, std::span<const int> y_pred);

struct EvalReport {
    std::string method;
    std::vector<MacroMetrics> folds;
    // pooled confusion totals for the positive class: tp, fp, fn, tn
    long tp = 0, fp = 0, fn = 0, tn = 0;

    MacroMetrics mean() const;
};

// Builds the train/test design matrices for one fold. Receives training
// indices only besides the held-out rows it must featurize, so fold
// fitting can never see held-out labels.
struct FoldFeatures {
    Matrix train_x;
    Matrix test_x;
};
using FeatureBuilder =
    std::function<FoldFeatures(std::span<const std::size_t> train_rows,
                               std::span<const std::size_t> test_rows)>;

FeatureBuilder precomputed_features(const Matrix& all_rows);

EvalReport cross_validate(const FeatureBuilder& builder, std::span<const int> y, int k,
                          std::uint64_t fold_seed, const LogRegOptions& options,
                          const std::string& method_name);

enum class BaselineKind { majority_class, random_selection };

EvalReport cross_validate_baseline(BaselineKind kind, std::span<const int> y, int k,
                                   std::uint64_t fold_seed, std::uint64_t predict_seed,
                                   const std::string& method_name);

struct ImportanceEntry {
    std::string name;
    double weight; // signed; ranked by magnitude
};

// Top dimensions of one schema family ranked by |weight|, ties by name.
// Errors: UnknownFamily, LengthMismatch.
std::vector<ImportanceEntry> feature_importance(const LogRegModel& model,
                                                const FeatureSchema& schema,
                                                const std::string& family, std::size_t top_k);

} // namespace trolllens
