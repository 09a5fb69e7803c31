#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gbpp/io.hpp"
#include "gbpp/synth.hpp"
#include "helpers.hpp"

using namespace gbpp;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/gbpp_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& content) const {
        std::ofstream out(path);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

}  // namespace

TEST_CASE("load csv") {
    TempFile f("basic.csv");
    f.write("a,b,class\n1.0,2.0,yes\n3.0,4.5,no\n5.5,6.0,yes\n");
    auto ds = load_dataset(f.path);
    CHECK(ds.n() == 3);
    CHECK(ds.q == 2);
    CHECK(ds.classes == std::vector<int>{0, 1});
    CHECK(ds.class_names == std::vector<std::string>{"no", "yes"});
    CHECK(ds.samples[0].label == 1);   // "yes"
    CHECK(ds.samples[1].label == 0);   // "no"
    CHECK(ds.samples[0].features == std::vector<double>{1.0, 2.0});
    CHECK(ds.samples[2].index == 2);
    CHECK(ds.name == "gbpp_test_basic");

    SUBCASE("label column by name") {
        TempFile g("mid.csv");
        g.write("class,a,b\n1,0.5,0.5\n2,1.5,1.5\n");
        LoadOptions opts;
        opts.label_column = "class";
        auto mid = load_dataset(g.path, opts);
        CHECK(mid.q == 2);
        CHECK(mid.samples[0].features == std::vector<double>{0.5, 0.5});
        CHECK(mid.samples[0].label == 0);
    }
    SUBCASE("label column by index, headerless") {
        TempFile g("noheader.csv");
        g.write("7,0.5\n8,1.5\n");
        LoadOptions opts;
        opts.has_header = false;
        opts.label_column = "0";
        auto ds2 = load_dataset(g.path, opts);
        CHECK(ds2.q == 1);
        CHECK(ds2.samples[0].features == std::vector<double>{0.5});
        CHECK(ds2.classes == std::vector<int>{0, 1});
    }
    SUBCASE("numeric labels sort numerically") {
        TempFile g("numlab.csv");
        g.write("x,y\n0.1,10\n0.2,2\n0.3,-1\n");
        LoadOptions opts;
        auto ds2 = load_dataset(g.path, opts);
        CHECK(ds2.class_names == std::vector<std::string>{"-1", "2", "10"});
        CHECK(ds2.samples[0].label == 2);
    }
}

TEST_CASE("load csv errors") {
    SUBCASE("empty file") {
        TempFile f("empty.csv");
        f.write("");
        CHECK_THROWS_AS(load_dataset(f.path), std::runtime_error);
    }
    SUBCASE("header only") {
        TempFile f("headeronly.csv");
        f.write("a,b,c\n");
        CHECK_THROWS_AS(load_dataset(f.path), std::runtime_error);
    }
    SUBCASE("ragged row names the line") {
        TempFile f("ragged.csv");
        f.write("a,b,c\n1,2,x\n1,2\n");
        CHECK_THROWS_WITH_AS(load_dataset(f.path),
                             (f.path + ":3: expected 3 columns, got 2").c_str(),
                             std::runtime_error);
    }
    SUBCASE("non-numeric feature") {
        TempFile f("alpha.csv");
        f.write("a,b\noops,1\n");
        CHECK_THROWS_WITH_AS(load_dataset(f.path),
                             (f.path + ":2: non-numeric feature 'oops'").c_str(),
                             std::runtime_error);
    }
    SUBCASE("missing label column") {
        TempFile f("nolabel.csv");
        f.write("a,b\n1,2\n");
        LoadOptions opts;
        opts.label_column = "target";
        CHECK_THROWS_AS(load_dataset(f.path, opts), std::runtime_error);
    }
}

TEST_CASE("load libsvm") {
    TempFile f("basic.libsvm");
    f.write("1 1:0.5 3:2.0\n-1 2:1.0\n1 1:1.5 2:0.5 3:0.25\n");
    LoadOptions opts;
    opts.format = FileFormat::Libsvm;
    auto ds = load_dataset(f.path, opts);
    CHECK(ds.n() == 3);
    CHECK(ds.q == 3);  // inferred from the max index
    CHECK(ds.samples[0].features == std::vector<double>{0.5, 0.0, 2.0});
    CHECK(ds.samples[1].features == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(ds.class_names == std::vector<std::string>{"-1", "1"});
    CHECK(ds.samples[0].label == 1);
    CHECK(ds.samples[1].label == 0);

    SUBCASE("declared dimensions pad the tail") {
        LoadOptions wide = opts;
        wide.dimensions = 5;
        auto ds2 = load_dataset(f.path, wide);
        CHECK(ds2.q == 5);
        CHECK(ds2.samples[1].features == std::vector<double>{0.0, 1.0, 0.0, 0.0, 0.0});
    }
    SUBCASE("zero-based index is rejected") {
        TempFile g("zero.libsvm");
        g.write("1 0:0.5\n");
        CHECK_THROWS_AS(load_dataset(g.path, opts), std::runtime_error);
    }
    SUBCASE("malformed entry names the line") {
        TempFile g("bad.libsvm");
        g.write("1 1:0.5\n1 nonsense\n");
        CHECK_THROWS_AS(load_dataset(g.path, opts), std::runtime_error);
    }
}

TEST_CASE("minmax normalization") {
    auto train = gbpp::testing::dataset_2d({{{0.0, 3.0}, 0}, {{10.0, 3.0}, 1}});
    auto params = fit_minmax(train);
    CHECK(params.min == std::vector<double>{0.0, 3.0});
    CHECK(params.max == std::vector<double>{10.0, 3.0});

    auto scaled = apply_minmax(train, params);
    CHECK(scaled.samples[0].features == std::vector<double>{0.0, 0.0});  // constant -> 0
    CHECK(scaled.samples[1].features == std::vector<double>{1.0, 0.0});
    CHECK(scaled.normalized);

    SUBCASE("values outside the train range are not clamped") {
        auto test = gbpp::testing::dataset_2d({{{20.0, 5.0}, 0}});
        auto out = apply_minmax(test, params);
        CHECK(out.samples[0].features[0] == doctest::Approx(2.0));
    }
    SUBCASE("double normalization is rejected") {
        CHECK_THROWS_AS(apply_minmax(scaled, params), std::invalid_argument);
    }
    SUBCASE("bundle applies train params to the others") {
        auto test = gbpp::testing::dataset_2d({{{5.0, 3.0}, 0}});
        auto bundle = fit_apply_minmax(train, {test});
        CHECK(bundle.others[0].samples[0].features == std::vector<double>{0.5, 0.0});
    }
}

TEST_CASE("ball file round-trip") {
    auto ds = synth::make_ecoli();
    auto bundle = fit_apply_minmax(ds);
    GranulationConfig cfg;
    auto result = granulate(bundle.train, cfg);

    TempFile f1("balls1.jsonl");
    TempFile f2("balls2.jsonl");
    export_balls(result, bundle.train, f1.path);
    auto imported = import_balls(f1.path);
    write_ball_file(imported, f2.path);
    CHECK(f1.read() == f2.read());  // byte-identical re-export

    CHECK(imported.balls.size() == result.balls.size());
    CHECK(imported.outliers == result.outliers);
    CHECK(imported.distance_evaluations == result.counters.distance_evaluations);
    CHECK(imported.config.purity_threshold == cfg.purity_threshold);
    CHECK(imported.dataset_n == bundle.train.n());
    for (size_t i = 0; i < imported.balls.size(); ++i) {
        CHECK(imported.balls[i].center == result.balls[i].center);  // bitwise
        CHECK(imported.balls[i].radius == result.balls[i].radius);  // bitwise
        CHECK(imported.balls[i].member_count ==
              static_cast<int>(result.balls[i].members.size()));
    }

    SUBCASE("classifier built from the file matches the in-memory one") {
        auto from_file = to_classifier(imported, BallRule::HarmonicDistance);
        auto in_memory = BallClassifier::from_result(result, BallRule::HarmonicDistance);
        REQUIRE(from_file.balls.size() == in_memory.balls.size());
        CHECK(from_file.total_members == in_memory.total_members);
        for (int i = 0; i < 25; ++i) {
            const auto& s = bundle.train.samples[static_cast<size_t>(i * 7 % bundle.train.n())];
            CHECK(predict_gbknn_pp(from_file, s.features).label ==
                  predict_gbknn_pp(in_memory, s.features).label);
        }
    }
}

TEST_CASE("ball file outliers serialize as an empty array when absent") {
    auto ds = gbpp::testing::dataset_1d({{0.0, 0}, {0.5, 0}, {1.0, 0}});
    GranulationConfig cfg;
    auto result = granulate(ds, cfg);
    REQUIRE(result.outliers.empty());
    TempFile f("noout.jsonl");
    export_balls(result, ds, f.path);
    CHECK(f.read().find("\"outliers\":[]") != std::string::npos);
}

TEST_CASE("ball file rejects garbage") {
    TempFile f("garbage.jsonl");
    f.write("not json\n");
    CHECK_THROWS_AS(import_balls(f.path), std::runtime_error);
    TempFile g("wrongformat.jsonl");
    g.write("{\"format\":\"other\",\"version\":1}\n");
    CHECK_THROWS_AS(import_balls(g.path), std::runtime_error);
}

TEST_CASE("unwritable path") {
    auto ds = gbpp::testing::dataset_1d({{0.0, 0}, {1.0, 0}});
    GranulationConfig cfg;
    auto result = granulate(ds, cfg);
    CHECK_THROWS_AS(export_balls(result, ds, "/nonexistent_dir/x.jsonl"), std::runtime_error);
}

TEST_CASE("format and method names") {
    CHECK(format_from_string("csv") == FileFormat::Csv);
    CHECK(format_from_string("libsvm") == FileFormat::Libsvm);
    CHECK_THROWS_AS(format_from_string("xml"), std::invalid_argument);
    CHECK(method_from_string("gbg++") == GranulationMethod::GbgPlusPlus);
    CHECK(method_from_string("kmeans") == GranulationMethod::KMeansBaseline);
    CHECK(to_string(GranulationMethod::GbgPlusPlus) == "gbg++");
}
