#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gbpp/core.hpp"
#include "gbpp/eval.hpp"
#include "gbpp/granulation.hpp"

namespace gbpp::testing {

/// 1-D dataset from (value, label) pairs.
inline Dataset dataset_1d(const std::vector<std::pair<double, int>>& rows,
                          const std::string& name = "test1d") {
    Dataset ds;
    ds.q = 1;
    ds.name = name;
    int index = 0;
    for (const auto& [v, l] : rows) ds.samples.push_back({{v}, l, index++});
    ds.rebuild_classes();
    return ds;
}

inline Dataset dataset_2d(const std::vector<std::pair<std::vector<double>, int>>& rows,
                          const std::string& name = "test2d") {
    Dataset ds;
    ds.q = 2;
    ds.name = name;
    int index = 0;
    for (const auto& [v, l] : rows) ds.samples.push_back({v, l, index++});
    ds.rebuild_classes();
    return ds;
}

/// Members of all balls plus outliers form an exact partition of 0..n-1.
inline bool partition_holds(const GranulationResult& result, int n) {
    std::vector<int> seen;
    for (const auto& ball : result.balls)
        seen.insert(seen.end(), ball.members.begin(), ball.members.end());
    seen.insert(seen.end(), result.outliers.begin(), result.outliers.end());
    if (static_cast<int>(seen.size()) != n) return false;
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < n; ++i)
        if (seen[static_cast<size_t>(i)] != i) return false;
    return true;
}

/// Every member lies within its ball's radius.
inline bool containment_holds(const GranulationResult& result, const Dataset& ds) {
    for (const auto& ball : result.balls)
        for (int p : ball.members)
            if (euclidean(ds.samples[static_cast<size_t>(p)].features, ball.center) > ball.radius)
                return false;
    return true;
}

inline bool purity_all_one(const GranulationResult& result) {
    return std::all_of(result.balls.begin(), result.balls.end(),
                       [](const GranularBall& b) { return b.purity == 1.0; });
}

inline bool no_singleton_balls(const GranulationResult& result) {
    return std::all_of(result.balls.begin(), result.balls.end(),
                       [](const GranularBall& b) { return b.members.size() >= 2; });
}

/// Ball labels and purities agree with a recount of their members.
inline bool labels_purities_consistent(const GranulationResult& result, const Dataset& ds) {
    for (const auto& ball : result.balls) {
        std::vector<int> labels;
        for (int p : ball.members) labels.push_back(ds.samples[static_cast<size_t>(p)].label);
        const auto [label, purity] = label_and_purity(labels);
        if (label != ball.label || purity != ball.purity) return false;
    }
    return true;
}

/// Independent signed-rank oracle: midrank by counting, not sorting.
/// rank(|d_i|) = #{|d_j| < |d_i|} + (#{|d_j| == |d_i|} + 1) / 2.
inline WilcoxonResult wilcoxon_oracle(const std::vector<double>& diffs) {
    WilcoxonResult res;
    const size_t n = diffs.size();
    for (size_t i = 0; i < n; ++i) {
        const double a = std::abs(diffs[i]);
        size_t less = 0, equal = 0;
        for (size_t j = 0; j < n; ++j) {
            if (std::abs(diffs[j]) < a) ++less;
            if (std::abs(diffs[j]) == a) ++equal;
        }
        const double rank =
            static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
        if (diffs[i] > 0.0)
            res.r_plus += rank;
        else if (diffs[i] < 0.0)
            res.r_minus += rank;
        else {
            res.r_plus += rank / 2.0;
            res.r_minus += rank / 2.0;
        }
    }
    res.statistic_t = std::min(res.r_plus, res.r_minus);
    if (n == 20) res.reject_at_0_05 = res.statistic_t <= 52.0;
    return res;
}

}  // namespace gbpp::testing
