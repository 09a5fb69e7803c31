#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "gbpp/synth.hpp"

using namespace gbpp;

namespace {

std::map<int, int> class_counts(const Dataset& ds) {
    std::map<int, int> counts;
    for (const auto& s : ds.samples) ++counts[s.label];
    return counts;
}

}  // namespace

TEST_CASE("generator shapes match their namesakes") {
    auto fourclass = synth::make_fourclass();
    CHECK(fourclass.n() == 862);
    CHECK(fourclass.q == 2);
    CHECK(class_counts(fourclass) == std::map<int, int>{{0, 307}, {1, 555}});

    auto svmguide1 = synth::make_svmguide1();
    CHECK(svmguide1.n() == 7089);
    CHECK(svmguide1.q == 4);
    CHECK(class_counts(svmguide1) == std::map<int, int>{{0, 3089}, {1, 4000}});

    auto sonar = synth::make_sonar();
    CHECK(sonar.n() == 208);
    CHECK(sonar.q == 60);
    CHECK(class_counts(sonar) == std::map<int, int>{{0, 97}, {1, 111}});

    auto ecoli = synth::make_ecoli();
    CHECK(ecoli.n() == 336);
    CHECK(ecoli.q == 7);
    CHECK(ecoli.classes.size() == 8);
    CHECK(class_counts(ecoli) ==
          std::map<int, int>{{0, 143}, {1, 77}, {2, 52}, {3, 35}, {4, 20}, {5, 5}, {6, 2}, {7, 2}});

    auto diabetes = synth::make_diabetes();
    CHECK(diabetes.n() == 768);
    CHECK(diabetes.q == 8);
    CHECK(class_counts(diabetes) == std::map<int, int>{{0, 500}, {1, 268}});
}

TEST_CASE("generators are deterministic per seed") {
    auto a = synth::make_sonar(5);
    auto b = synth::make_sonar(5);
    auto c = synth::make_sonar(6);
    REQUIRE(a.n() == b.n());
    bool all_equal = true, differs_across_seeds = false;
    for (int i = 0; i < a.n(); ++i) {
        if (a.samples[static_cast<size_t>(i)].features !=
            b.samples[static_cast<size_t>(i)].features)
            all_equal = false;
        if (a.samples[static_cast<size_t>(i)].features !=
            c.samples[static_cast<size_t>(i)].features)
            differs_across_seeds = true;
    }
    CHECK(all_equal);
    CHECK(differs_across_seeds);
}

TEST_CASE("by_name covers the known list") {
    for (const auto& name : synth::known_names()) {
        auto ds = synth::by_name(name);
        CHECK(ds.name == name);
        CHECK(ds.n() > 0);
        CHECK_NOTHROW(ds.validate());
    }
    CHECK_THROWS_AS(synth::by_name("mnist"), std::invalid_argument);
}
