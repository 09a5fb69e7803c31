#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbpp/core.hpp"
#include "gbpp/granulation.hpp"

namespace gbpp {

enum class BallRule {
    HarmonicDistance,  // GBkNN++: center distance minus the ball's sample share
    SurfaceDistance    // original GBkNN: center distance minus the radius
};

/// Immutable ball-set classifier. Works from the compact per-ball view so it
/// can be built either from a granulation result or from an exported ball
/// file (which stores member counts, not member lists).
struct BallClassifier {
    struct BallView {
        std::vector<double> center;
        double radius = 0.0;
        int label = 0;
        std::uint64_t member_count = 0;
        int ball_id = 0;
    };

    std::vector<BallView> balls;      // ascending ball_id
    std::uint64_t total_members = 0;  // sum of member counts
    BallRule rule = BallRule::HarmonicDistance;

    /// Throws std::runtime_error("empty model") when the result has no balls.
    static BallClassifier from_result(const GranulationResult& result, BallRule rule);
    static BallClassifier from_views(std::vector<BallView> views, BallRule rule);
};

struct Prediction {
    int label = 0;
    int ball_id = 0;
};

double harmonic_distance(std::span<const double> x, const BallClassifier::BallView& ball,
                         std::uint64_t total_members);

/// Label of the ball with the smallest harmonic distance; ties go to the
/// smallest ball id. Exactly one distance evaluation per ball.
Prediction predict_gbknn_pp(const BallClassifier& clf, std::span<const double> x,
                            Counters* counters = nullptr);

/// Label of the ball with the smallest surface distance; ties go to the
/// smallest ball id.
Prediction predict_gbknn_original(const BallClassifier& clf, std::span<const double> x,
                                  Counters* counters = nullptr);

/// Dispatch on clf.rule.
Prediction predict(const BallClassifier& clf, std::span<const double> x,
                   Counters* counters = nullptr);

/// Plain kNN over training samples: majority label of the k nearest, distance
/// ties broken by the smaller row position, label ties by the smaller label.
int predict_knn(const Dataset& train, std::span<const double> x, int k);

}  // namespace gbpp
