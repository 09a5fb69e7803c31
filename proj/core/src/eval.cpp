#include "gbpp/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "gbpp/io.hpp"
#include "gbpp/rng.hpp"

namespace gbpp {

std::vector<FoldSplit> stratified_kfold(const Dataset& ds, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("stratified_kfold: need at least 2 folds");
    if (folds > ds.n()) throw std::invalid_argument("stratified_kfold: more folds than samples");

    std::vector<std::vector<int>> by_class(ds.classes.size());
    for (int i = 0; i < ds.n(); ++i) {
        const auto it = std::lower_bound(ds.classes.begin(), ds.classes.end(),
                                         ds.samples[static_cast<size_t>(i)].label);
        by_class[static_cast<size_t>(it - ds.classes.begin())].push_back(i);
    }

    Engine rng(seed);
    std::vector<std::vector<int>> fold_members(static_cast<size_t>(folds));
    for (auto& group : by_class) {
        rng.shuffle(group);
        for (int pos : group) {
            // deal to the smallest fold; ties go to the lowest fold id
            size_t target = 0;
            for (size_t f = 1; f < fold_members.size(); ++f)
                if (fold_members[f].size() < fold_members[target].size()) target = f;
            fold_members[target].push_back(pos);
        }
    }

    std::vector<FoldSplit> splits(static_cast<size_t>(folds));
    for (size_t f = 0; f < fold_members.size(); ++f) {
        std::sort(fold_members[f].begin(), fold_members[f].end());
        splits[f].test = fold_members[f];
        for (size_t g = 0; g < fold_members.size(); ++g) {
            if (g == f) continue;
            splits[f].train.insert(splits[f].train.end(), fold_members[g].begin(),
                                   fold_members[g].end());
        }
        std::sort(splits[f].train.begin(), splits[f].train.end());
    }
    return splits;
}

Dataset inject_label_noise(const Dataset& ds, double rate, std::uint64_t seed) {
    if (rate < 0.0 || rate > 1.0)
        throw std::invalid_argument("inject_label_noise: rate must be in [0, 1]");
    if (rate == 0.0) return ds;
    if (ds.classes.size() < 2)
        throw std::invalid_argument("inject_label_noise: single-class dataset");

    const auto flips = static_cast<size_t>(std::llround(rate * ds.n()));
    std::vector<int> order(static_cast<size_t>(ds.n()));
    std::iota(order.begin(), order.end(), 0);
    Engine rng(seed);
    rng.shuffle(order);

    Dataset out = ds;
    for (size_t i = 0; i < flips; ++i) {
        Sample& s = out.samples[static_cast<size_t>(order[i])];
        const auto it = std::lower_bound(ds.classes.begin(), ds.classes.end(), s.label);
        const size_t own = static_cast<size_t>(it - ds.classes.begin());
        size_t pick = rng.uniform_below(ds.classes.size() - 1);
        if (pick >= own) ++pick;
        s.label = ds.classes[pick];
    }
    out.rebuild_classes();
    return out;
}

EvalReport cross_validate_model(const Dataset& ds, int folds, std::uint64_t seed,
                                const ModelBuilder& builder) {
    const auto splits = stratified_kfold(ds, folds, seed);
    EvalReport report;
    report.dataset = ds.name;
    report.folds = folds;
    report.fold_seed = seed;

    for (const auto& split : splits) {
        Dataset train = subset(ds, split.train);
        Dataset test = subset(ds, split.test);
        auto bundle = fit_apply_minmax(train, {std::move(test)});
        const Dataset& train_n = bundle.train;
        const Dataset& test_n = bundle.others.front();

        Counters counters;
        const auto t0 = std::chrono::steady_clock::now();
        FoldModel model = builder(train_n, counters);
        const auto t1 = std::chrono::steady_clock::now();
        report.granulation_distance_evaluations += counters.distance_evaluations;

        int correct = 0;
        for (const auto& s : test_n.samples)
            if (model.predict_label(s) == s.label) ++correct;
        const auto t2 = std::chrono::steady_clock::now();

        report.granulate_seconds += std::chrono::duration<double>(t1 - t0).count();
        report.predict_seconds += std::chrono::duration<double>(t2 - t1).count();
        report.per_fold_accuracies.push_back(static_cast<double>(correct) /
                                             static_cast<double>(test_n.n()));
    }
    report.mean_accuracy = mean_of(report.per_fold_accuracies);
    report.sd_accuracy = sample_sd(report.per_fold_accuracies);
    return report;
}

EvalReport cross_validate(const Dataset& ds, const GranulationConfig& gran, BallRule rule,
                          int folds, std::uint64_t seed) {
    gran.validate();
    EvalReport report;
    std::vector<int> ball_counts;
    std::uint64_t predict_evals = 0;

    ModelBuilder builder = [&](const Dataset& train, Counters& counters) -> FoldModel {
        GranulationResult result = run_granulation(train, gran);
        counters.distance_evaluations += result.counters.distance_evaluations;
        ball_counts.push_back(static_cast<int>(result.balls.size()));
        auto clf = std::make_shared<BallClassifier>(BallClassifier::from_result(result, rule));
        return FoldModel{[clf, &predict_evals](const Sample& s) {
            Counters c;
            const Prediction p = predict(*clf, s.features, &c);
            predict_evals += c.distance_evaluations;
            return p.label;
        }};
    };
    report = cross_validate_model(ds, folds, seed, builder);
    // canonical pairings: gbknn++ = gbg++ & harmonic, gbknn = kmeans & surface;
    // off-diagonal combinations are tagged with their granulator
    const bool harmonic = rule == BallRule::HarmonicDistance;
    const bool baseline = gran.method == GranulationMethod::KMeansBaseline;
    report.method = harmonic ? "gbknn++" : "gbknn";
    if (harmonic && baseline) report.method += "/kmeans";
    if (!harmonic && !baseline) report.method += "/gbg++";
    report.gran_config = gran;
    report.rule = rule;
    report.ball_counts = std::move(ball_counts);
    report.prediction_distance_evaluations = predict_evals;
    return report;
}

EvalReport cross_validate_knn(const Dataset& ds, std::span<const int> k_values, int folds,
                              std::uint64_t seed) {
    if (k_values.empty()) throw std::invalid_argument("cross_validate_knn: empty k grid");
    std::vector<int> ks(k_values.begin(), k_values.end());

    // Fold accuracy is averaged over the k grid, so the per-sample predictor
    // isn't the right shape here; run the folds directly.
    const auto splits = stratified_kfold(ds, folds, seed);
    EvalReport report;
    report.method = "knn";
    report.dataset = ds.name;
    report.folds = folds;
    report.fold_seed = seed;
    report.knn_k_values = ks;

    for (const auto& split : splits) {
        Dataset train = subset(ds, split.train);
        Dataset test = subset(ds, split.test);
        auto bundle = fit_apply_minmax(train, {std::move(test)});
        const Dataset& train_n = bundle.train;
        const Dataset& test_n = bundle.others.front();

        const auto t0 = std::chrono::steady_clock::now();
        double acc_sum = 0.0;
        for (int k : ks) {
            if (k > train_n.n())
                throw std::invalid_argument("cross_validate_knn: k exceeds training fold size");
            int correct = 0;
            for (const auto& s : test_n.samples)
                if (predict_knn(train_n, s.features, k) == s.label) ++correct;
            acc_sum += static_cast<double>(correct) / static_cast<double>(test_n.n());
        }
        report.predict_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.per_fold_accuracies.push_back(acc_sum / static_cast<double>(ks.size()));
    }
    report.mean_accuracy = mean_of(report.per_fold_accuracies);
    report.sd_accuracy = sample_sd(report.per_fold_accuracies);
    return report;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs) {
    if (diffs.empty()) throw std::invalid_argument("wilcoxon_signed_rank: empty input");
    const size_t n = diffs.size();

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });

    // average ranks within tie groups of |d|
    std::vector<double> rank(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    WilcoxonResult res;
    for (size_t k = 0; k < n; ++k) {
        if (diffs[k] > 0.0)
            res.r_plus += rank[k];
        else if (diffs[k] < 0.0)
            res.r_minus += rank[k];
        else {
            res.r_plus += rank[k] / 2.0;
            res.r_minus += rank[k] / 2.0;
        }
    }
    res.statistic_t = std::min(res.r_plus, res.r_minus);
    if (n == 20) res.reject_at_0_05 = res.statistic_t <= 52.0;
    return res;
}

double lnt(double seconds) {
    if (seconds <= 0.0) throw std::invalid_argument("lnt: time must be positive");
    return std::log(seconds);
}

double mean_of(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean_of: empty input");
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean_of(values);
    double acc = 0.0;
    for (double v : values) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace gbpp
