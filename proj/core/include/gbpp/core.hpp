#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gbpp {

/// One labeled feature vector. `index` is the row id assigned at load time
/// and is preserved by subsetting, normalization and noise injection.
struct Sample {
    std::vector<double> features;
    int label = 0;
    int index = 0;
};

struct Dataset {
    std::vector<Sample> samples;
    int q = 0;                             // feature dimensionality
    std::vector<int> classes;              // sorted distinct labels
    std::vector<std::string> class_names;  // dense label -> source label text
    std::string name;
    std::string source_path;
    bool normalized = false;

    int n() const { return static_cast<int>(samples.size()); }

    /// Recompute `classes` from the samples currently present.
    void rebuild_classes();

    /// Check dimensionality, finiteness and label consistency.
    /// Throws std::invalid_argument on the first violation.
    void validate() const;
};

/// Rows of `ds` at the given positions, in the given order. Sample `index`
/// fields are preserved; `classes` is rebuilt from the retained rows.
Dataset subset(const Dataset& ds, std::span<const int> positions);

/// A ball covering a subset of samples: center = mean of the points it was
/// built on, radius = mean distance from those points to the center.
struct GranularBall {
    std::vector<double> center;
    double radius = 0.0;
    std::vector<int> members;  // row positions in the granulated dataset
    int label = 0;
    double purity = 1.0;
    int generation = 0;  // splitting iteration that created the ball
    int ball_id = 0;     // creation-order id, unique within one granulation run
};

double euclidean(std::span<const double> a, std::span<const double> b);

struct CenterRadius {
    std::vector<double> center;
    double radius = 0.0;
};

/// Center and radius of the ball generated on `points` (arithmetic mean and
/// mean Euclidean distance to it). Throws on an empty set or mixed dimensions.
CenterRadius compute_center_radius(const std::vector<std::vector<double>>& points);
CenterRadius compute_center_radius(const Dataset& ds, std::span<const int> positions);

/// The candidates whose distance to `center` is <= `radius` (boundary
/// inclusive), input order preserved.
std::vector<Sample> membership(const std::vector<Sample>& candidates,
                               std::span<const double> center, double radius);

/// Mode label (smallest label on ties) and its frequency share.
std::pair<int, double> label_and_purity(std::span<const int> labels);

/// The samples carrying the mode label (attention score 1), smallest label on
/// ties, order preserved.
std::vector<Sample> majority_class(const std::vector<Sample>& samples);

/// Positions in `positions` whose sample carries the mode label.
std::vector<int> majority_class_positions(const Dataset& ds, std::span<const int> positions);

/// Distance from `x` to the ball surface: euclidean(x, center) - radius.
/// Negative inside the ball.
double surface_distance(std::span<const double> x, const GranularBall& ball);

enum class Nesting { None, Homogeneous, Heterogeneous };

/// Two balls are nested when the distance between centers is <= |r1 - r2|.
/// Heterogeneous when their labels differ.
Nesting nesting_relation(const GranularBall& a, const GranularBall& b);

}  // namespace gbpp
