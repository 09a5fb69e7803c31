#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gbpp/core.hpp"

namespace gbpp {

enum class GranulationMethod { GbgPlusPlus, KMeansBaseline };

struct GranulationConfig {
    double purity_threshold = 1.0;
    GranulationMethod method = GranulationMethod::GbgPlusPlus;
    bool enable_outlier_detection = true;  // drop single-sample balls
    bool enable_am = true;                 // off: build children on all undivided samples
    std::uint64_t kmeans_seed = 0;         // baseline only
    int kmeans_k = 2;                      // baseline only
    int max_iterations = 10000;

    void validate() const;
};

/// Count of Euclidean distance computations actually performed.
struct Counters {
    std::uint64_t distance_evaluations = 0;
};

struct GranulationResult {
    std::vector<GranularBall> balls;
    std::vector<int> outliers;  // row positions dropped as orphans or unstable
    int iterations = 0;         // outer passes that changed the ball set
    Counters counters;
    double wall_time_seconds = 0.0;
    GranulationConfig config;
};

struct SplitOutcome {
    std::vector<GranularBall> children;
    std::vector<int> orphans;  // undivided leftovers, orphan candidates
};

/// One round of attention-based splitting: repeatedly build a child on the
/// majority class of the undivided set T (on all of T when enable_am is off)
/// and move the samples within its radius out of T. Stops when the majority
/// class of T has a single sample or T is exhausted; leftovers are returned
/// as orphan candidates. `next_ball_id` supplies creation-order ids.
SplitOutcome split_ball(const GranularBall& ball, const Dataset& ds,
                        const GranulationConfig& cfg, Counters& counters, int& next_ball_id);

/// Remove single-member balls; their samples are reported as outliers.
std::pair<std::vector<GranularBall>, std::vector<int>> detect_orphans(
    std::vector<GranularBall> children);

/// Merge heterogeneous nested pairs until none remain. Pairs are scanned in
/// ascending ball-id order and the scan restarts after every merge; the
/// merged ball is rebuilt on the member union and gets a fresh id.
/// Homogeneous nestings are left alone.
std::vector<GranularBall> deconflict(std::vector<GranularBall> children, const Dataset& ds,
                                     Counters& counters, int& next_ball_id);

/// The GBG++ pipeline: start from a single ball holding the whole dataset and
/// split every ball below the purity threshold (split -> orphan detection ->
/// de-conflict) until no ball changes. A ball whose split reproduces itself is
/// removed for good and its samples recorded as outliers.
GranulationResult granulate(const Dataset& ds, const GranulationConfig& cfg);

/// Baseline granulation: split impure balls with seeded 2-means, no orphan
/// detection, no de-conflict. Single-sample balls are allowed.
GranulationResult granulate_kmeans_baseline(const Dataset& ds, const GranulationConfig& cfg);

/// Dispatch on cfg.method.
GranulationResult run_granulation(const Dataset& ds, const GranulationConfig& cfg);

/// Seeded 2-means over points: first centroid is a random member, the second
/// the member farthest from it. Returns both cluster index lists, never empty
/// (degenerate splits fall back to the farthest pair, then to an index split).
std::pair<std::vector<int>, std::vector<int>> two_means(
    const std::vector<std::vector<double>>& points, std::uint64_t seed,
    Counters* counters = nullptr);

/// Heterogeneous nested pairs remaining in a final ball set (diagnostic; the
/// pipeline only de-conflicts siblings within one split round).
int count_heterogeneous_nestings(const std::vector<GranularBall>& balls);

}  // namespace gbpp
