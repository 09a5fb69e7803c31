#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbpp/classify.hpp"
#include "gbpp/core.hpp"
#include "gbpp/granulation.hpp"

namespace gbpp {

struct FoldSplit {
    std::vector<int> train;  // row positions
    std::vector<int> test;
};

/// Seeded stratified k-fold: shuffle each class, then deal samples to the
/// currently smallest fold. Folds partition the row positions.
std::vector<FoldSplit> stratified_kfold(const Dataset& ds, int folds, std::uint64_t seed);

/// Flip the labels of exactly round(rate*n) distinct seeded-drawn samples,
/// each to a uniformly drawn different label.
Dataset inject_label_noise(const Dataset& ds, double rate, std::uint64_t seed);

struct EvalReport {
    std::string method;  // "gbknn++", "gbknn", "gbknn++/kmeans", "knn", ...
    std::string dataset;
    std::vector<double> per_fold_accuracies;
    double mean_accuracy = 0.0;
    double sd_accuracy = 0.0;
    double granulate_seconds = 0.0;  // model-building phase, summed over folds
    double predict_seconds = 0.0;
    std::uint64_t granulation_distance_evaluations = 0;
    std::uint64_t prediction_distance_evaluations = 0;
    int folds = 0;
    std::uint64_t fold_seed = 0;
    std::optional<GranulationConfig> gran_config;
    std::optional<BallRule> rule;
    std::vector<int> knn_k_values;
    std::vector<int> ball_counts;  // per fold (ball methods only)
};

/// Per-fold model used by the cross-validation engine: normalization is done
/// by the engine, the builder sees the normalized training fold.
struct FoldModel {
    std::function<int(const Sample&)> predict_label;
};
using ModelBuilder = std::function<FoldModel(const Dataset& train_normalized, Counters& counters)>;

/// Generic stratified-CV loop: min-max fit on each training fold, applied to
/// both sides; per-fold accuracy, timing split into build and predict phases.
EvalReport cross_validate_model(const Dataset& ds, int folds, std::uint64_t seed,
                                const ModelBuilder& builder);

/// Granulate each training fold with `gran` and classify with `rule`.
/// A fold whose granulation retains no ball raises "empty model".
EvalReport cross_validate(const Dataset& ds, const GranulationConfig& gran, BallRule rule,
                          int folds, std::uint64_t seed);

/// Plain kNN baseline; fold accuracy is the mean over the k grid.
EvalReport cross_validate_knn(const Dataset& ds, std::span<const int> k_values, int folds,
                              std::uint64_t seed);

struct WilcoxonResult {
    double r_plus = 0.0;
    double r_minus = 0.0;
    double statistic_t = 0.0;              // min(r_plus, r_minus)
    std::optional<bool> reject_at_0_05;    // defined for N == 20 only (critical value 52)
};

/// Signed-rank sums over |d| with average ranks on ties; zero differences
/// contribute half their rank to each side.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs);

/// ln(t); the timing display index. Throws on t <= 0.
double lnt(double seconds);

double mean_of(std::span<const double> values);
double sample_sd(std::span<const double> values);

}  // namespace gbpp
