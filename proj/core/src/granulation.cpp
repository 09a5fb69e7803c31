#include "gbpp/granulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gbpp/rng.hpp"

namespace gbpp {

void GranulationConfig::validate() const {
    if (!(purity_threshold > 0.0 && purity_threshold <= 1.0))
        throw std::invalid_argument("purity threshold must be in (0, 1]");
    if (method == GranulationMethod::KMeansBaseline && kmeans_k < 2)
        throw std::invalid_argument("kmeans_k must be >= 2");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
}

namespace {

enum class RadiusRule {
    MeanDistance,  // mean distance to the center, the standard ball radius
    CoverAll       // max distance; keeps a ball with prescribed members
                   // consistent with the membership rule
};

GranularBall make_ball(const Dataset& ds, std::vector<int> members, int generation, int ball_id,
                       Counters& counters, RadiusRule rule) {
    GranularBall ball;
    ball.center.assign(static_cast<size_t>(ds.q), 0.0);
    for (int p : members)
        for (int d = 0; d < ds.q; ++d)
            ball.center[static_cast<size_t>(d)] +=
                ds.samples[static_cast<size_t>(p)].features[static_cast<size_t>(d)];
    for (double& c : ball.center) c /= static_cast<double>(members.size());

    double sum = 0.0, max_dist = 0.0;
    for (int p : members) {
        const double d = euclidean(ds.samples[static_cast<size_t>(p)].features, ball.center);
        ++counters.distance_evaluations;
        sum += d;
        max_dist = std::max(max_dist, d);
    }
    ball.radius = rule == RadiusRule::CoverAll ? max_dist
                                               : sum / static_cast<double>(members.size());

    std::vector<int> labels;
    labels.reserve(members.size());
    for (int p : members) labels.push_back(ds.samples[static_cast<size_t>(p)].label);
    std::tie(ball.label, ball.purity) = label_and_purity(labels);
    ball.members = std::move(members);
    ball.generation = generation;
    ball.ball_id = ball_id;
    return ball;
}

bool same_members(const GranularBall& a, const GranularBall& b) {
    return a.members == b.members;
}

std::string dump_state(const std::vector<GranularBall>& balls) {
    std::ostringstream os;
    os << balls.size() << " balls:";
    for (const auto& b : balls)
        os << " [id=" << b.ball_id << " n=" << b.members.size() << " purity=" << b.purity << "]";
    return os.str();
}

}  // namespace

SplitOutcome split_ball(const GranularBall& ball, const Dataset& ds,
                        const GranulationConfig& cfg, Counters& counters, int& next_ball_id) {
    if (!(ball.purity < cfg.purity_threshold))
        throw std::invalid_argument("split_ball: ball already meets the purity threshold");
    if (ball.members.size() < 2)
        throw std::invalid_argument("split_ball: ball must contain at least two samples");

    SplitOutcome out;
    std::vector<int> undivided = ball.members;  // T, parent order preserved
    const size_t q = static_cast<size_t>(ds.q);

    int rounds = 0;
    while (!undivided.empty()) {
        if (++rounds > cfg.max_iterations) throw std::runtime_error("split did not converge");

        std::vector<int> labels;
        labels.reserve(undivided.size());
        for (int p : undivided) labels.push_back(ds.samples[static_cast<size_t>(p)].label);
        const int mode = label_and_purity(labels).first;
        size_t focus_count = 0;
        for (int l : labels)
            if (l == mode) ++focus_count;
        if (focus_count <= 1) break;  // |lhg(T)| == 1: leftovers are orphan candidates

        // Center over the attention target (majority class; all of T when AM is off).
        const bool am = cfg.enable_am;
        const size_t target_count = am ? focus_count : undivided.size();
        std::vector<double> center(q, 0.0);
        for (size_t i = 0; i < undivided.size(); ++i) {
            if (am && labels[i] != mode) continue;
            const auto& f = ds.samples[static_cast<size_t>(undivided[i])].features;
            for (size_t d = 0; d < q; ++d) center[d] += f[d];
        }
        for (double& c : center) c /= static_cast<double>(target_count);

        // One distance per undivided sample: the target subset yields the
        // mean-distance radius, the whole of T is screened for membership.
        std::vector<double> dists(undivided.size());
        double sum = 0.0, min_target = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < undivided.size(); ++i) {
            dists[i] = euclidean(ds.samples[static_cast<size_t>(undivided[i])].features, center);
            ++counters.distance_evaluations;
            if (!am || labels[i] == mode) {
                sum += dists[i];
                min_target = std::min(min_target, dists[i]);
            }
        }
        // The mean can round below the closest target point when distances are
        // all equal; the closest point must stay inside for the split to move.
        const double radius = std::max(sum / static_cast<double>(target_count), min_target);

        GranularBall child;
        child.center = std::move(center);
        child.radius = radius;
        std::vector<int> remaining;
        std::vector<int> member_labels;
        for (size_t i = 0; i < undivided.size(); ++i) {
            if (dists[i] <= radius) {
                child.members.push_back(undivided[i]);
                member_labels.push_back(labels[i]);
            } else {
                remaining.push_back(undivided[i]);
            }
        }
        std::tie(child.label, child.purity) = label_and_purity(member_labels);
        child.generation = ball.generation + 1;
        child.ball_id = next_ball_id++;
        out.children.push_back(std::move(child));
        undivided = std::move(remaining);
    }
    out.orphans = std::move(undivided);
    return out;
}

std::pair<std::vector<GranularBall>, std::vector<int>> detect_orphans(
    std::vector<GranularBall> children) {
    std::vector<GranularBall> kept;
    std::vector<int> dropped;
    for (auto& child : children) {
        if (child.members.size() == 1)
            dropped.push_back(child.members.front());
        else
            kept.push_back(std::move(child));
    }
    return {std::move(kept), std::move(dropped)};
}

std::vector<GranularBall> deconflict(std::vector<GranularBall> children, const Dataset& ds,
                                     Counters& counters, int& next_ball_id) {
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < children.size() && !merged; ++i) {
            for (size_t j = i + 1; j < children.size() && !merged; ++j) {
                ++counters.distance_evaluations;  // center-to-center check
                if (nesting_relation(children[i], children[j]) != Nesting::Heterogeneous)
                    continue;
                std::vector<int> merged_members = children[i].members;
                merged_members.insert(merged_members.end(), children[j].members.begin(),
                                      children[j].members.end());
                const int generation = std::max(children[i].generation, children[j].generation);
                children.erase(children.begin() + static_cast<std::ptrdiff_t>(j));
                children.erase(children.begin() + static_cast<std::ptrdiff_t>(i));
                children.push_back(make_ball(ds, std::move(merged_members), generation,
                                             next_ball_id++, counters, RadiusRule::MeanDistance));
                merged = true;
            }
        }
    }
    return children;
}

namespace {

GranulationResult granulate_loop(const Dataset& ds, const GranulationConfig& cfg,
                                 bool baseline) {
    cfg.validate();
    if (ds.n() == 0) throw std::invalid_argument("granulate: empty dataset");
    if (baseline && cfg.kmeans_k != 2)
        throw std::invalid_argument("granulate: the baseline split supports kmeans_k=2 only");
    const auto t0 = std::chrono::steady_clock::now();

    GranulationResult result;
    result.config = cfg;
    Counters& counters = result.counters;
    int next_ball_id = 0;

    std::vector<int> all(static_cast<size_t>(ds.n()));
    for (int i = 0; i < ds.n(); ++i) all[static_cast<size_t>(i)] = i;
    std::vector<GranularBall> balls;
    balls.push_back(
        make_ball(ds, std::move(all), 0, next_ball_id++, counters, RadiusRule::CoverAll));
    std::vector<int>& outliers = result.outliers;

    int pass = 0;
    while (true) {
        if (++pass > cfg.max_iterations)
            throw std::runtime_error("granulate: iteration cap exceeded; " + dump_state(balls));
        bool changed = false;
        std::vector<GranularBall> next;
        next.reserve(balls.size());
        for (auto& ball : balls) {
            if (ball.purity >= cfg.purity_threshold) {
                next.push_back(std::move(ball));
                continue;
            }
            changed = true;

            std::vector<GranularBall> children;
            std::vector<int> removed;
            if (baseline) {
                std::vector<std::vector<double>> pts;
                pts.reserve(ball.members.size());
                for (int p : ball.members) pts.push_back(ds.samples[static_cast<size_t>(p)].features);
                auto [left, right] = two_means(pts, cfg.kmeans_seed, &counters);
                for (const auto& cluster : {left, right}) {
                    std::vector<int> ids;
                    ids.reserve(cluster.size());
                    for (int idx : cluster) ids.push_back(ball.members[static_cast<size_t>(idx)]);
                    children.push_back(make_ball(ds, std::move(ids), ball.generation + 1,
                                                 next_ball_id++, counters,
                                                 RadiusRule::MeanDistance));
                }
            } else {
                auto outcome = split_ball(ball, ds, cfg, counters, next_ball_id);
                children = std::move(outcome.children);
                if (cfg.enable_outlier_detection) {
                    removed = std::move(outcome.orphans);
                    auto [kept, dropped] = detect_orphans(std::move(children));
                    children = std::move(kept);
                    removed.insert(removed.end(), dropped.begin(), dropped.end());
                } else {
                    // Outlier handling disabled: leftovers become one-sample balls.
                    for (int p : outcome.orphans)
                        children.push_back(make_ball(ds, {p}, ball.generation + 1,
                                                     next_ball_id++, counters,
                                                     RadiusRule::MeanDistance));
                }
                children = deconflict(std::move(children), ds, counters, next_ball_id);
            }

            // Stability rule: a split that reproduces its parent can never
            // reach the threshold, so the ball is dropped for good.
            if (!baseline && children.size() == 1 && removed.empty() &&
                same_members(children.front(), ball) &&
                children.front().purity < cfg.purity_threshold) {
                outliers.insert(outliers.end(), ball.members.begin(), ball.members.end());
                continue;
            }
            outliers.insert(outliers.end(), removed.begin(), removed.end());
            for (auto& child : children) next.push_back(std::move(child));
        }
        balls = std::move(next);
        if (!changed) break;
        ++result.iterations;
    }

    result.balls = std::move(balls);
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace

GranulationResult granulate(const Dataset& ds, const GranulationConfig& cfg) {
    if (cfg.method != GranulationMethod::GbgPlusPlus)
        throw std::invalid_argument("granulate: config method is not GbgPlusPlus");
    return granulate_loop(ds, cfg, /*baseline=*/false);
}

GranulationResult granulate_kmeans_baseline(const Dataset& ds, const GranulationConfig& cfg) {
    if (cfg.method != GranulationMethod::KMeansBaseline)
        throw std::invalid_argument("granulate_kmeans_baseline: config method is not KMeansBaseline");
    return granulate_loop(ds, cfg, /*baseline=*/true);
}

GranulationResult run_granulation(const Dataset& ds, const GranulationConfig& cfg) {
    return cfg.method == GranulationMethod::GbgPlusPlus ? granulate(ds, cfg)
                                                        : granulate_kmeans_baseline(ds, cfg);
}

namespace {

// Assign every point to the nearer of two centroids (ties to the first).
// Returns true when any assignment changed.
bool assign_two(const std::vector<std::vector<double>>& points,
                const std::vector<double>& c0, const std::vector<double>& c1,
                std::vector<int>& assignment, Counters* counters) {
    bool changed = false;
    for (size_t i = 0; i < points.size(); ++i) {
        const double d0 = euclidean(points[i], c0);
        const double d1 = euclidean(points[i], c1);
        if (counters) counters->distance_evaluations += 2;
        const int a = d1 < d0 ? 1 : 0;
        if (a != assignment[i]) {
            assignment[i] = a;
            changed = true;
        }
    }
    return changed;
}

std::vector<double> cluster_mean(const std::vector<std::vector<double>>& points,
                                 const std::vector<int>& assignment, int which) {
    std::vector<double> mean(points[0].size(), 0.0);
    size_t count = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        if (assignment[i] != which) continue;
        for (size_t d = 0; d < mean.size(); ++d) mean[d] += points[i][d];
        ++count;
    }
    if (count > 0)
        for (double& m : mean) m /= static_cast<double>(count);
    return mean;
}

// Lloyd iterations from fixed initial centroids. Returns false when one side
// ends up empty.
bool lloyd_two(const std::vector<std::vector<double>>& points, std::vector<double> c0,
               std::vector<double> c1, std::vector<int>& assignment, Counters* counters) {
    constexpr int kMaxRounds = 1000;
    assignment.assign(points.size(), -1);
    for (int round = 0; round < kMaxRounds; ++round) {
        if (!assign_two(points, c0, c1, assignment, counters)) break;
        const size_t n1 = static_cast<size_t>(std::count(assignment.begin(), assignment.end(), 1));
        if (n1 == 0 || n1 == points.size()) return false;
        c0 = cluster_mean(points, assignment, 0);
        c1 = cluster_mean(points, assignment, 1);
    }
    const size_t n1 = static_cast<size_t>(std::count(assignment.begin(), assignment.end(), 1));
    return n1 != 0 && n1 != points.size();
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> two_means(
    const std::vector<std::vector<double>>& points, std::uint64_t seed, Counters* counters) {
    const size_t n = points.size();
    if (n < 2) throw std::invalid_argument("two_means: need at least two points");

    Engine rng(seed);
    const size_t i0 = rng.uniform_below(n);
    size_t i1 = 0;
    double best = -1.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = euclidean(points[i], points[i0]);
        if (counters) ++counters->distance_evaluations;
        if (d > best) {
            best = d;
            i1 = i;
        }
    }

    std::vector<int> assignment;
    bool ok = lloyd_two(points, points[i0], points[i1], assignment, counters);
    if (!ok) {
        // Degenerate split: re-seed with the farthest pair of members.
        size_t fa = 0, fb = 1;
        double far = -1.0;
        for (size_t a = 0; a < n; ++a)
            for (size_t b = a + 1; b < n; ++b) {
                const double d = euclidean(points[a], points[b]);
                if (counters) ++counters->distance_evaluations;
                if (d > far) {
                    far = d;
                    fa = a;
                    fb = b;
                }
            }
        if (far > 0.0) ok = lloyd_two(points, points[fa], points[fb], assignment, counters);
        if (!ok) {
            // All points coincide (or Lloyd degenerated again): split by index.
            assignment.assign(n, 1);
            for (size_t i = 0; i < (n + 1) / 2; ++i) assignment[i] = 0;
        }
    }

    std::pair<std::vector<int>, std::vector<int>> partition;
    for (size_t i = 0; i < n; ++i)
        (assignment[i] == 0 ? partition.first : partition.second).push_back(static_cast<int>(i));
    return partition;
}

int count_heterogeneous_nestings(const std::vector<GranularBall>& balls) {
    int count = 0;
    for (size_t i = 0; i < balls.size(); ++i)
        for (size_t j = i + 1; j < balls.size(); ++j)
            if (nesting_relation(balls[i], balls[j]) == Nesting::Heterogeneous) ++count;
    return count;
}

}  // namespace gbpp
