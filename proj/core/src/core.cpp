#include "gbpp/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gbpp {

void Dataset::rebuild_classes() {
    classes.clear();
    for (const auto& s : samples) classes.push_back(s.label);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
}

void Dataset::validate() const {
    for (const auto& s : samples) {
        if (static_cast<int>(s.features.size()) != q)
            throw std::invalid_argument("dataset: sample " + std::to_string(s.index) +
                                        " has dimension " + std::to_string(s.features.size()) +
                                        ", expected " + std::to_string(q));
        for (double v : s.features)
            if (!std::isfinite(v))
                throw std::invalid_argument("dataset: non-finite feature in sample " +
                                            std::to_string(s.index));
        if (!std::binary_search(classes.begin(), classes.end(), s.label))
            throw std::invalid_argument("dataset: label " + std::to_string(s.label) +
                                        " of sample " + std::to_string(s.index) +
                                        " missing from the class list");
    }
}

Dataset subset(const Dataset& ds, std::span<const int> positions) {
    Dataset out;
    out.q = ds.q;
    out.class_names = ds.class_names;
    out.name = ds.name;
    out.source_path = ds.source_path;
    out.normalized = ds.normalized;
    out.samples.reserve(positions.size());
    for (int p : positions) out.samples.push_back(ds.samples.at(static_cast<size_t>(p)));
    out.rebuild_classes();
    return out;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("euclidean: dimension mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

namespace {

template <typename PointAt>
CenterRadius center_radius_impl(size_t count, size_t dim, PointAt&& point_at) {
    if (count == 0) throw std::invalid_argument("compute_center_radius: empty point set");
    CenterRadius cr;
    cr.center.assign(dim, 0.0);
    for (size_t i = 0; i < count; ++i) {
        std::span<const double> p = point_at(i);
        if (p.size() != dim)
            throw std::invalid_argument("compute_center_radius: dimension mismatch");
        for (size_t d = 0; d < dim; ++d) cr.center[d] += p[d];
    }
    for (double& c : cr.center) c /= static_cast<double>(count);
    double sum = 0.0;
    for (size_t i = 0; i < count; ++i) sum += euclidean(point_at(i), cr.center);
    cr.radius = sum / static_cast<double>(count);
    return cr;
}

}  // namespace

CenterRadius compute_center_radius(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("compute_center_radius: empty point set");
    return center_radius_impl(points.size(), points[0].size(),
                              [&](size_t i) { return std::span<const double>(points[i]); });
}

CenterRadius compute_center_radius(const Dataset& ds, std::span<const int> positions) {
    if (positions.empty()) throw std::invalid_argument("compute_center_radius: empty point set");
    return center_radius_impl(
        positions.size(), static_cast<size_t>(ds.q), [&](size_t i) {
            return std::span<const double>(ds.samples[static_cast<size_t>(positions[i])].features);
        });
}

std::vector<Sample> membership(const std::vector<Sample>& candidates,
                               std::span<const double> center, double radius) {
    if (radius < 0.0) throw std::invalid_argument("membership: negative radius");
    std::vector<Sample> inside;
    for (const auto& s : candidates)
        if (euclidean(s.features, center) <= radius) inside.push_back(s);
    return inside;
}

std::pair<int, double> label_and_purity(std::span<const int> labels) {
    if (labels.empty()) throw std::invalid_argument("label_and_purity: empty label list");
    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    int best_label = counts.begin()->first;
    int best_count = counts.begin()->second;
    for (const auto& [label, count] : counts) {
        if (count > best_count) {  // map iterates labels ascending, so ties keep the smallest
            best_label = label;
            best_count = count;
        }
    }
    return {best_label, static_cast<double>(best_count) / static_cast<double>(labels.size())};
}

std::vector<Sample> majority_class(const std::vector<Sample>& samples) {
    if (samples.empty()) throw std::invalid_argument("majority_class: empty sample list");
    std::vector<int> labels;
    labels.reserve(samples.size());
    for (const auto& s : samples) labels.push_back(s.label);
    const int mode = label_and_purity(labels).first;
    std::vector<Sample> out;
    for (const auto& s : samples)
        if (s.label == mode) out.push_back(s);
    return out;
}

std::vector<int> majority_class_positions(const Dataset& ds, std::span<const int> positions) {
    if (positions.empty()) throw std::invalid_argument("majority_class: empty sample list");
    std::vector<int> labels;
    labels.reserve(positions.size());
    for (int p : positions) labels.push_back(ds.samples[static_cast<size_t>(p)].label);
    const int mode = label_and_purity(labels).first;
    std::vector<int> out;
    for (int p : positions)
        if (ds.samples[static_cast<size_t>(p)].label == mode) out.push_back(p);
    return out;
}

double surface_distance(std::span<const double> x, const GranularBall& ball) {
    return euclidean(x, ball.center) - ball.radius;
}

Nesting nesting_relation(const GranularBall& a, const GranularBall& b) {
    const double d = euclidean(a.center, b.center);
    if (d > std::abs(a.radius - b.radius)) return Nesting::None;
    return a.label == b.label ? Nesting::Homogeneous : Nesting::Heterogeneous;
}

}  // namespace gbpp
