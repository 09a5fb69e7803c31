#include "gbpp/classify.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gbpp {

BallClassifier BallClassifier::from_result(const GranulationResult& result, BallRule rule) {
    std::vector<BallView> views;
    views.reserve(result.balls.size());
    for (const auto& ball : result.balls)
        views.push_back({ball.center, ball.radius, ball.label,
                         static_cast<std::uint64_t>(ball.members.size()), ball.ball_id});
    return from_views(std::move(views), rule);
}

BallClassifier BallClassifier::from_views(std::vector<BallView> views, BallRule rule) {
    if (views.empty()) throw std::runtime_error("empty model");
    std::sort(views.begin(), views.end(),
              [](const BallView& a, const BallView& b) { return a.ball_id < b.ball_id; });
    BallClassifier clf;
    clf.total_members = 0;
    for (const auto& v : views) clf.total_members += v.member_count;
    if (clf.total_members == 0) throw std::runtime_error("empty model");
    clf.balls = std::move(views);
    clf.rule = rule;
    return clf;
}

double harmonic_distance(std::span<const double> x, const BallClassifier::BallView& ball,
                         std::uint64_t total_members) {
    return euclidean(x, ball.center) -
           static_cast<double>(ball.member_count) / static_cast<double>(total_members);
}

namespace {

template <typename Score>
Prediction argmin_ball(const BallClassifier& clf, Score&& score, Counters* counters) {
    if (clf.balls.empty()) throw std::runtime_error("empty model");
    double best = std::numeric_limits<double>::infinity();
    const BallClassifier::BallView* best_ball = nullptr;
    for (const auto& ball : clf.balls) {  // ascending ball_id: '<' keeps the smallest on ties
        const double s = score(ball);
        if (counters) ++counters->distance_evaluations;
        if (s < best) {
            best = s;
            best_ball = &ball;
        }
    }
    return {best_ball->label, best_ball->ball_id};
}

}  // namespace

Prediction predict_gbknn_pp(const BallClassifier& clf, std::span<const double> x,
                            Counters* counters) {
    if (clf.rule != BallRule::HarmonicDistance)
        throw std::invalid_argument("predict_gbknn_pp: classifier rule is not HarmonicDistance");
    const std::uint64_t total = clf.total_members;
    return argmin_ball(
        clf, [&](const BallClassifier::BallView& b) { return harmonic_distance(x, b, total); },
        counters);
}

Prediction predict_gbknn_original(const BallClassifier& clf, std::span<const double> x,
                                  Counters* counters) {
    if (clf.rule != BallRule::SurfaceDistance)
        throw std::invalid_argument(
            "predict_gbknn_original: classifier rule is not SurfaceDistance");
    return argmin_ball(
        clf, [&](const BallClassifier::BallView& b) { return euclidean(x, b.center) - b.radius; },
        counters);
}

Prediction predict(const BallClassifier& clf, std::span<const double> x, Counters* counters) {
    return clf.rule == BallRule::HarmonicDistance ? predict_gbknn_pp(clf, x, counters)
                                                  : predict_gbknn_original(clf, x, counters);
}

int predict_knn(const Dataset& train, std::span<const double> x, int k) {
    const int n = train.n();
    if (k < 1 || k > n) throw std::invalid_argument("predict_knn: k out of range");
    std::vector<std::pair<double, int>> dist_pos;
    dist_pos.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        dist_pos.emplace_back(euclidean(train.samples[static_cast<size_t>(i)].features, x), i);
    std::partial_sort(dist_pos.begin(), dist_pos.begin() + k, dist_pos.end());

    std::vector<std::pair<int, int>> votes;  // (label, count)
    for (int i = 0; i < k; ++i) {
        const int label = train.samples[static_cast<size_t>(dist_pos[static_cast<size_t>(i)].second)].label;
        auto it = std::find_if(votes.begin(), votes.end(),
                               [&](const auto& v) { return v.first == label; });
        if (it == votes.end())
            votes.emplace_back(label, 1);
        else
            ++it->second;
    }
    int best_label = votes.front().first, best_count = 0;
    for (const auto& [label, count] : votes)
        if (count > best_count || (count == best_count && label < best_label)) {
            best_label = label;
            best_count = count;
        }
    return best_label;
}

}  // namespace gbpp
