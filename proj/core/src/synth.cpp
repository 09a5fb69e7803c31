#include "gbpp/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "gbpp/rng.hpp"

namespace gbpp::synth {

namespace {

void finish(Dataset& ds, const std::string& name, int q) {
    ds.q = q;
    ds.name = name;
    for (int i = 0; i < ds.n(); ++i) ds.samples[static_cast<size_t>(i)].index = i;
    ds.rebuild_classes();
    ds.class_names.clear();
    for (int c : ds.classes) ds.class_names.push_back(std::to_string(c));
}

}  // namespace

Dataset make_blobs(const std::vector<Blob>& blobs, std::uint64_t seed,
                   const std::string& name) {
    if (blobs.empty()) throw std::invalid_argument("make_blobs: no components");
    const size_t q = blobs.front().center.size();
    Engine rng(seed);
    Dataset ds;
    for (const auto& blob : blobs) {
        if (blob.center.size() != q)
            throw std::invalid_argument("make_blobs: mixed component dimensions");
        for (int i = 0; i < blob.count; ++i) {
            Sample s;
            s.features.resize(q);
            for (size_t d = 0; d < q; ++d)
                s.features[d] = blob.center[d] + blob.sd * rng.normal();
            s.label = blob.label;
            ds.samples.push_back(std::move(s));
        }
    }
    finish(ds, name, static_cast<int>(q));
    return ds;
}

Dataset make_moons(int count0, int count1, double noise_sd, std::uint64_t seed,
                   const std::string& name) {
    if (count0 < 1 || count1 < 1) throw std::invalid_argument("make_moons: empty class");
    Engine rng(seed);
    Dataset ds;
    auto emit = [&](int count, int label, bool lower) {
        for (int i = 0; i < count; ++i) {
            const double t = M_PI * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
            Sample s;
            if (lower)
                s.features = {1.0 - std::cos(t) + noise_sd * rng.normal(),
                              0.5 - std::sin(t) + noise_sd * rng.normal()};
            else
                s.features = {std::cos(t) + noise_sd * rng.normal(),
                              std::sin(t) + noise_sd * rng.normal()};
            s.label = label;
            ds.samples.push_back(std::move(s));
        }
    };
    emit(count0, 0, false);
    emit(count1, 1, true);
    finish(ds, name, 2);
    return ds;
}

Dataset make_fourclass(std::uint64_t seed) {
    // 862 rows, 2 features, 307/555 class split; locally dense curved classes.
    return make_moons(307, 555, 0.09, seed, "fourclass");
}

Dataset make_svmguide1(std::uint64_t seed) {
    // 7089 rows, 4 features, 3089/4000; two components per class, mild overlap.
    std::vector<Blob> blobs{
        {{0.0, 0.0, 0.0, 0.0}, 1.00, 1600, 0},
        {{2.9, 2.4, 0.0, 1.6}, 1.10, 1489, 0},
        {{2.4, -2.1, 2.5, 0.8}, 1.00, 2200, 1},
        {{-0.7, 2.5, 2.8, -1.5}, 1.05, 1800, 1},
    };
    return make_blobs(blobs, seed, "svmguide1");
}

Dataset make_sonar(std::uint64_t seed) {
    // 208 rows, 60 features, 97/111; two heavily overlapping clouds.
    const int q = 60;
    std::vector<double> c0(q, 0.0), c1(q, 0.0);
    // class offset spread over a low-dimensional direction block
    for (int d = 0; d < 12; ++d) c1[static_cast<size_t>(d)] = 0.86;
    std::vector<Blob> blobs{
        {c0, 1.0, 97, 0},
        {c1, 1.0, 111, 1},
    };
    return make_blobs(blobs, seed, "sonar");
}

Dataset make_ecoli(std::uint64_t seed) {
    // 336 rows, 7 features, 8 classes with the familiar imbalance; the two
    // "im*" satellites sit close to the main "im" cloud.
    std::vector<Blob> blobs{
        {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.55, 143, 0},
        {{2.4, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0}, 0.55, 77, 1},
        {{0.0, 2.4, 0.0, 0.0, 0.8, 0.0, 0.0}, 0.55, 52, 2},
        {{2.9, 0.6, 0.0, 1.2, 0.0, 0.4, 0.0}, 0.50, 35, 3},
        {{0.0, 0.0, 2.6, 0.0, 0.0, 0.0, 0.9}, 0.50, 20, 4},
        {{0.4, 0.0, 3.1, 0.0, 0.0, 0.0, 1.3}, 0.45, 5, 5},
        {{2.6, 0.3, 0.5, 0.9, 0.3, 0.0, 0.0}, 0.45, 2, 6},
        {{2.2, 0.4, 0.4, 1.1, 0.0, 0.2, 0.0}, 0.45, 2, 7},
    };
    return make_blobs(blobs, seed, "ecoli");
}

Dataset make_diabetes(std::uint64_t seed) {
    // 768 rows, 8 features, 500/268; strong class overlap.
    const int q = 8;
    std::vector<double> c0(q, 0.0), c1(q, 0.0);
    for (int d = 0; d < 4; ++d) c1[static_cast<size_t>(d)] = 0.75;
    std::vector<Blob> blobs{
        {c0, 1.0, 500, 0},
        {c1, 1.0, 268, 1},
    };
    return make_blobs(blobs, seed, "diabetes");
}

Dataset by_name(const std::string& name, std::uint64_t seed) {
    if (name == "fourclass") return make_fourclass(seed);
    if (name == "svmguide1") return make_svmguide1(seed);
    if (name == "sonar") return make_sonar(seed);
    if (name == "ecoli") return make_ecoli(seed);
    if (name == "diabetes") return make_diabetes(seed);
    throw std::invalid_argument("unknown synthetic dataset: " + name);
}

std::vector<std::string> known_names() {
    return {"fourclass", "svmguide1", "sonar", "ecoli", "diabetes"};
}

}  // namespace gbpp::synth
